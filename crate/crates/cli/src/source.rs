//! Parsing of `--state` specifications.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use discordlab_core::states::{
    maximally_mixed, product_state, random_state, singlet, werner, zero_discord_state,
    DensityMatrix,
};
use discordlab_core::RandomSeed;

use crate::error::CliError;
use crate::statefile;

/// Where an input state comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSource {
    Werner(f64),
    MaximallyMixed,
    Singlet,
    Product([f64; 3], [f64; 3]),
    ZeroDiscord(u64),
    Random(u64),
    File(PathBuf),
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!(
            "expected three comma-separated components, got {s:?}"
        ));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("not a number: {p:?}"))?;
    }
    Ok(out)
}

impl FromStr for StateSource {
    type Err = String;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let spec = spec.trim();
        let spec = spec.strip_prefix("builtin:").unwrap_or(spec);
        let (kind, arg) = match spec.split_once(':') {
            Some((k, a)) => (k, Some(a)),
            None => (spec, None),
        };
        let need =
            |what: &str| arg.ok_or_else(|| format!("state spec `{kind}` needs `{kind}:<{what}>`"));
        match kind {
            "werner" => {
                let a = need("c")?;
                a.parse()
                    .map(StateSource::Werner)
                    .map_err(|_| format!("werner weight is not a number: {a:?}"))
            }
            "maximally-mixed" => Ok(StateSource::MaximallyMixed),
            "singlet" => Ok(StateSource::Singlet),
            "product" => {
                let a = need("ax,ay,az;bx,by,bz")?;
                let (ba, bb) = a.split_once(';').ok_or_else(|| {
                    "product spec needs two Bloch vectors separated by ';'".to_string()
                })?;
                Ok(StateSource::Product(parse_vec3(ba)?, parse_vec3(bb)?))
            }
            "zd" => {
                let a = need("seed")?;
                a.parse()
                    .map(StateSource::ZeroDiscord)
                    .map_err(|_| format!("zd seed is not an unsigned integer: {a:?}"))
            }
            "random" => {
                let a = need("seed")?;
                a.parse()
                    .map(StateSource::Random)
                    .map_err(|_| format!("random seed is not an unsigned integer: {a:?}"))
            }
            "file" => Ok(StateSource::File(PathBuf::from(need("path")?))),
            other => Err(format!(
                "unknown state spec `{other}` (expected werner:<c>, maximally-mixed, singlet, \
                 product:<a>;<b>, zd:<seed>, random:<seed> or file:<path>)"
            )),
        }
    }
}

impl fmt::Display for StateSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSource::Werner(c) => write!(f, "werner:{c}"),
            StateSource::MaximallyMixed => f.write_str("maximally-mixed"),
            StateSource::Singlet => f.write_str("singlet"),
            StateSource::Product(a, b) => {
                write!(
                    f,
                    "product:{},{},{};{},{},{}",
                    a[0], a[1], a[2], b[0], b[1], b[2]
                )
            }
            StateSource::ZeroDiscord(s) => write!(f, "zd:{s}"),
            StateSource::Random(s) => write!(f, "random:{s}"),
            StateSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl StateSource {
    pub fn load(&self) -> Result<DensityMatrix, CliError> {
        let rho = match self {
            StateSource::Werner(c) => werner(*c)?,
            StateSource::MaximallyMixed => maximally_mixed(),
            StateSource::Singlet => singlet(),
            StateSource::Product(a, b) => product_state(*a, *b)?,
            StateSource::ZeroDiscord(s) => zero_discord_state(RandomSeed(*s)),
            StateSource::Random(s) => random_state(RandomSeed(*s)),
            StateSource::File(p) => statefile::read_state(p)?,
        };
        Ok(rho)
    }

    pub fn werner_weight(&self) -> Option<f64> {
        match self {
            StateSource::Werner(c) => Some(*c),
            _ => None,
        }
    }
}
