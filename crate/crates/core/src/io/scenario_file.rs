//! Flat `key = value` scenario files.
//!
//! One assignment per line; `#` starts a comment; blank lines are ignored.
//! Unknown or repeated keys are errors. Every key is optional:
//!
//! ```text
//! name               = uniform
//! model              = nolb          # bc | nolb-freeze | nolb | rnolb
//! rstar              = 0.5
//! dt                 = 0.01
//! t_end              = 200
//! seed               = 0
//! projection_tol     = 1e-10
//! geometry_eps       = 1e-9
//! integrator         = ssp-rk2       # euler | ssp-rk2
//! connectivity_guard = true
//! record_every       = 10
//! domain_length      = 10            # L, also the sampling interval
//! initial            = uniform       # uniform | hexagon | counterexample-r1 | explicit
//! n                  = 50            # uniform only
//! dim                = 1             # uniform and explicit
//! require_connected  = true          # uniform only
//! hexagon_rstar      = 0.05          # hexagon only, defaults to rstar
//! positions          = 0, 0.5, 1.2   # explicit only, row-major
//! phi                = indicator     # indicator | piecewise
//! phi_breakpoints    = 0, 0.5, 1     # piecewise only
//! phi_values         = 2, 1          # piecewise only
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::dynamics::{InteractionFunction, Integrator, Model, ModelParams};
use crate::error::{Error, Result};
use crate::harness::{InitialCondition, ScenarioSpec};

const KEYS: &[&str] = &[
    "name",
    "model",
    "rstar",
    "dt",
    "t_end",
    "seed",
    "projection_tol",
    "geometry_eps",
    "integrator",
    "connectivity_guard",
    "record_every",
    "domain_length",
    "initial",
    "n",
    "dim",
    "require_connected",
    "hexagon_rstar",
    "positions",
    "phi",
    "phi_breakpoints",
    "phi_values",
];

pub fn parse_scenario_file(path: &Path) -> Result<ScenarioSpec> {
    parse_scenario(&std::fs::read_to_string(path)?)
}

struct Entries(BTreeMap<&'static str, (usize, String)>);

impl Entries {
    fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.0.get(key) {
            None => Ok(default),
            Some((line, raw)) => raw.parse().map_err(|_| Error::Parse {
                line: *line,
                message: format!("cannot parse `{raw}` as a value for `{key}`"),
            }),
        }
    }

    fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        let Some((line, raw)) = self.0.get(key) else {
            return Ok(None);
        };
        raw.split(',')
            .map(|item| {
                item.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: *line,
                    message: format!("`{}` in `{key}` is not a number", item.trim()),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn has(&self, key: &str) -> bool {
        self.0.contains_key(key)
    }

    fn line_of(&self, key: &str) -> usize {
        self.0.get(key).map_or(0, |(l, _)| *l)
    }
}

pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
        };
        let key = key.trim();
        let Some(&known) = KEYS.iter().find(|k| **k == key) else {
            return Err(Error::Parse {
                line,
                message: format!("unknown key `{key}`"),
            });
        };
        if let Some((first, _)) = map.get(known) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate key `{key}` (first set on line {first})"),
            });
        }
        map.insert(known, (line, value.trim().to_string()));
    }
    let e = Entries(map);

    let model: Model = match e.0.get("model") {
        None => Model::Nolb,
        Some((line, raw)) => raw.parse().map_err(|err: Error| Error::Parse {
            line: *line,
            message: err.to_string(),
        })?,
    };
    let integrator = match e.0.get("integrator") {
        None => Integrator::default(),
        Some((line, raw)) => Integrator::parse(raw).map_err(|err| Error::Parse {
            line: *line,
            message: err.to_string(),
        })?,
    };
    let phi = match e.get("phi", "indicator".to_string())?.as_str() {
        "indicator" => InteractionFunction::Indicator,
        "piecewise" => {
            let breakpoints = e.list("phi_breakpoints")?.ok_or_else(|| Error::invalid("phi_breakpoints", "required for piecewise phi"))?;
            let values = e.list("phi_values")?.ok_or_else(|| Error::invalid("phi_values", "required for piecewise phi"))?;
            InteractionFunction::piecewise(breakpoints, values)?
        }
        other => {
            return Err(Error::Parse {
                line: e.line_of("phi"),
                message: format!("unknown phi `{other}`, expected indicator or piecewise"),
            })
        }
    };

    let defaults = ModelParams::default();
    let params = ModelParams {
        model,
        r_star: e.get("rstar", defaults.r_star)?,
        dt: e.get("dt", defaults.dt)?,
        t_end: e.get("t_end", 200.0)?,
        seed: e.get("seed", defaults.seed)?,
        projection_tol: e.get("projection_tol", defaults.projection_tol)?,
        geometry_eps: e.get("geometry_eps", defaults.geometry_eps)?,
        phi,
        integrator,
        connectivity_guard: e.get("connectivity_guard", true)?,
    };
    let domain_length: f64 = e.get("domain_length", 10.0)?;
    let dim: usize = e.get("dim", 1)?;

    let kind: String = e.get("initial", "uniform".to_string())?;
    let initial = match kind.as_str() {
        "uniform" => InitialCondition::Uniform {
            n: e.get("n", 50)?,
            dim,
            domain_length,
            require_connected: e.get("require_connected", true)?,
        },
        "hexagon" => InitialCondition::Hexagon {
            r_star: e.get("hexagon_rstar", params.r_star)?,
        },
        "counterexample-r1" => InitialCondition::CounterexampleR1,
        "explicit" => InitialCondition::Explicit {
            dim,
            positions: e.list("positions")?.ok_or_else(|| Error::invalid("positions", "required for explicit initial"))?,
        },
        other => {
            return Err(Error::Parse {
                line: e.line_of("initial"),
                message: format!("unknown initial `{other}`"),
            })
        }
    };
    for (key, allowed) in [
        ("n", kind == "uniform"),
        ("require_connected", kind == "uniform"),
        ("hexagon_rstar", kind == "hexagon"),
        ("positions", kind == "explicit"),
        ("dim", kind == "uniform" || kind == "explicit"),
    ] {
        if e.has(key) && !allowed {
            return Err(Error::Parse {
                line: e.line_of(key),
                message: format!("`{key}` does not apply to initial = {kind}"),
            });
        }
    }

    let spec = ScenarioSpec {
        name: e.get("name", kind.clone())?,
        initial,
        params,
        record_every: e.get("record_every", 10)?,
        domain_length,
    };
    spec.validate()?;
    if let InitialCondition::Explicit { dim, positions } = &spec.initial {
        crate::configuration::AgentConfiguration::from_flat(*dim, positions.clone())?;
    }
    Ok(spec)
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ")
}

/// Serializes `spec` so that [`parse_scenario`] reads it back unchanged.
pub fn write_scenario(spec: &ScenarioSpec) -> String {
    let p = &spec.params;
    let mut out = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("name", spec.name.clone());
    kv("model", p.model.to_string());
    kv("rstar", format!("{:?}", p.r_star));
    kv("dt", format!("{:?}", p.dt));
    kv("t_end", format!("{:?}", p.t_end));
    kv("seed", p.seed.to_string());
    kv("projection_tol", format!("{:?}", p.projection_tol));
    kv("geometry_eps", format!("{:?}", p.geometry_eps));
    kv("integrator", p.integrator.as_str().to_string());
    kv("connectivity_guard", p.connectivity_guard.to_string());
    kv("record_every", spec.record_every.to_string());
    kv("domain_length", format!("{:?}", spec.domain_length));
    match &spec.initial {
        InitialCondition::Uniform {
            n,
            dim,
            require_connected,
            ..
        } => {
            kv("initial", "uniform".into());
            kv("n", n.to_string());
            kv("dim", dim.to_string());
            kv("require_connected", require_connected.to_string());
        }
        InitialCondition::Hexagon { r_star } => {
            kv("initial", "hexagon".into());
            kv("hexagon_rstar", format!("{r_star:?}"));
        }
        InitialCondition::CounterexampleR1 => kv("initial", "counterexample-r1".into()),
        InitialCondition::Explicit { dim, positions } => {
            kv("initial", "explicit".into());
            kv("dim", dim.to_string());
            kv("positions", join(positions));
        }
    }
    match &p.phi {
        InteractionFunction::Indicator => kv("phi", "indicator".into()),
        InteractionFunction::PiecewiseConstant { breakpoints, values } => {
            kv("phi", "piecewise".into());
            kv("phi_breakpoints", join(breakpoints));
            kv("phi_values", join(values));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_gets_defaults() {
        let spec = parse_scenario("model = rnolb\nn = 20\nseed = 4 # root seed\n").unwrap();
        assert_eq!(spec.params.model, Model::Rnolb);
        assert_eq!(spec.params.seed, 4);
        assert_eq!(spec.params.r_star, 0.5);
        assert_eq!(spec.record_every, 10);
        assert_eq!(
            spec.initial,
            InitialCondition::Uniform {
                n: 20,
                dim: 1,
                domain_length: 10.0,
                require_connected: true
            }
        );
    }

    #[test]
    fn range_error_names_the_key() {
        let err = parse_scenario("rstar = 1.5\n").unwrap_err();
        assert!(err.to_string().contains("rstar"), "{err}");
    }

    #[test]
    fn duplicate_key_names_the_line() {
        let err = parse_scenario("seed = 1\n\nseed = 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn unknown_key_and_bad_syntax() {
        assert!(matches!(parse_scenario("# hi\nspeed = 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_scenario("seed 3\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_scenario("seed = x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_scenario("initial = hexagon\nn = 3\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn round_trips() {
        let texts = [
            "initial = explicit\ndim = 2\npositions = 0.1, 0.2, 0.30000000000000004, 1e-7\nphi = piecewise\nphi_breakpoints = 0, 0.3, 1\nphi_values = 2, 0.5\n",
            "initial = hexagon\nmodel = nolb-freeze\nhexagon_rstar = 0.05\nrstar = 0.1\nintegrator = euler\n",
            "initial = counterexample-r1\nrstar = 1\ngeometry_eps = 0\nconnectivity_guard = false\n",
            "model = bc\nn = 7\ndim = 3\nt_end = 0.123456789\nseed = 18446744073709551615\n",
        ];
        for text in texts {
            let spec = parse_scenario(text).unwrap();
            assert_eq!(parse_scenario(&write_scenario(&spec)).unwrap(), spec);
        }
    }
}
