//! Run configuration: flags and `key = value` files merged into one
//! validated [`RunConfig`].

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, FRAC_PI_8, PI};
use std::path::{Path, PathBuf};

use clap::Args;
use znav_core::export::{AngleConvention, View};
use znav_core::integrator::heading_fan;
use znav_core::spheroid::check_chart;
use znav_core::wind::{validate_mild, DEFAULT_MILD_GRID};
use znav_core::{Error, IntegratorConfig, MetricKind, Result, Spheroid, SurfacePoint, WindField, POLE_EPS};

/// Every key accepted in a config file, in flag spelling.
pub const KEYS: [&str; 20] = [
    "a",
    "wind",
    "start",
    "heading",
    "heading-start",
    "heading-step",
    "count",
    "kind",
    "kinds",
    "t-end",
    "sample-dt",
    "rel-tol",
    "abs-tol",
    "max-step",
    "out",
    "deg",
    "compass",
    "view",
    "segments",
    "n",
];

/// Options shared by every subcommand. Each one can also be given as a key
/// in the `--config` file; flags win.
#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// Flat `key = value` file using the long flag names as keys
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Polar semiaxis of the spheroid (1, 1, a)
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,

    /// `none` or `rotation:C`
    #[arg(long)]
    pub wind: Option<String>,

    /// Start point as `phi,theta`
    #[arg(long, value_name = "PHI,THETA", allow_hyphen_values = true)]
    pub start: Option<String>,

    /// Initial heading, counterclockwise from the local parallel
    #[arg(long, allow_hyphen_values = true)]
    pub heading: Option<String>,

    /// First heading of a fan
    #[arg(long, allow_hyphen_values = true)]
    pub heading_start: Option<String>,

    /// Heading increment of a fan (default 2pi/count)
    #[arg(long, allow_hyphen_values = true)]
    pub heading_step: Option<String>,

    /// Number of fan members
    #[arg(long)]
    pub count: Option<String>,

    /// Metric: h, alpha or randers
    #[arg(long)]
    pub kind: Option<String>,

    /// Comma-separated metrics to compare; the first is the reference
    #[arg(long)]
    pub kinds: Option<String>,

    #[arg(long)]
    pub t_end: Option<String>,

    #[arg(long)]
    pub sample_dt: Option<String>,

    #[arg(long)]
    pub rel_tol: Option<String>,

    #[arg(long)]
    pub abs_tol: Option<String>,

    #[arg(long)]
    pub max_step: Option<String>,

    /// Output directory
    #[arg(long, value_name = "DIR")]
    pub out: Option<String>,

    /// Read plain-number angles as degrees (pi fractions stay radians)
    #[arg(long)]
    pub deg: bool,

    /// Write heading and course clockwise from north
    #[arg(long)]
    pub compass: bool,

    /// 3D view: iso, x, y or z
    #[arg(long)]
    pub view: Option<String>,

    /// Interior time boundaries for colored segments, e.g. `1,2`
    #[arg(long, allow_hyphen_values = true)]
    pub segments: Option<String>,

    /// Sample count for indicatrices and speed curves
    #[arg(long)]
    pub n: Option<String>,
}

impl RunArgs {
    fn flag_entries(&self) -> Vec<(&'static str, Option<String>)> {
        let flag = |b: bool| b.then(|| "true".to_string());
        vec![
            ("a", self.a.clone()),
            ("wind", self.wind.clone()),
            ("start", self.start.clone()),
            ("heading", self.heading.clone()),
            ("heading-start", self.heading_start.clone()),
            ("heading-step", self.heading_step.clone()),
            ("count", self.count.clone()),
            ("kind", self.kind.clone()),
            ("kinds", self.kinds.clone()),
            ("t-end", self.t_end.clone()),
            ("sample-dt", self.sample_dt.clone()),
            ("rel-tol", self.rel_tol.clone()),
            ("abs-tol", self.abs_tol.clone()),
            ("max-step", self.max_step.clone()),
            ("out", self.out.clone()),
            ("deg", flag(self.deg)),
            ("compass", flag(self.compass)),
            ("view", self.view.clone()),
            ("segments", self.segments.clone()),
            ("n", self.n.clone()),
        ]
    }

    /// Config file entries overlaid with the flags that were given.
    pub fn merged(&self) -> Result<BTreeMap<String, String>> {
        let mut map = match &self.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        for (key, value) in self.flag_entries() {
            if let Some(v) = value {
                map.insert(key.to_string(), v);
            }
        }
        Ok(map)
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidConfig(msg.into())
}

pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

/// Parses `key = value` lines. `#` starts a comment; underscores in keys are
/// read as dashes.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key = value", i + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(invalid(format!("config line {}: unknown key '{key}'", i + 1)));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(invalid(format!("config line {}: duplicate key '{key}'", i + 1)));
        }
    }
    Ok(map)
}

/// A real number, optionally written as a fraction `p/q`.
pub fn parse_scalar(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || invalid(format!("not a number: '{s}'"));
    let x = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            p / q
        }
        None => s.parse().map_err(|_| bad())?,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

/// An angle in radians. Literals mentioning `pi` (`pi/3`, `-2pi/3`,
/// `0.5*pi`) are always radians; plain numbers are degrees when `deg` is set.
pub fn parse_angle(s: &str, deg: bool) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    let Some(at) = t.find("pi") else {
        let x = parse_scalar(&t)?;
        return Ok(if deg { x.to_radians() } else { x });
    };
    let bad = || invalid(format!("not an angle: '{s}'"));
    let coef = t[..at].trim().trim_end_matches('*').trim();
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    let rest = t[at + 2..].trim();
    let den = if rest.is_empty() {
        1.0
    } else {
        let d = rest.strip_prefix('/').ok_or_else(bad)?;
        d.trim().parse::<f64>().map_err(|_| bad())?
    };
    // unit fractions use the correctly rounded constants
    let x = match (coef, den) {
        (1.0, 2.0) => FRAC_PI_2,
        (1.0, 3.0) => FRAC_PI_3,
        (1.0, 4.0) => FRAC_PI_4,
        (1.0, 6.0) => FRAC_PI_6,
        (1.0, 8.0) => FRAC_PI_8,
        _ => coef * PI / den,
    };
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad())
    }
}

fn parse_bool(key: &str, s: &str) -> Result<bool> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(invalid(format!("{key}: expected true or false, got '{s}'"))),
    }
}

fn parse_count(key: &str, s: &str) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| invalid(format!("{key}: expected a non-negative integer, got '{s}'")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindSpec {
    None,
    Rotation(f64),
}

impl WindSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "none" || t == "calm" {
            return Ok(WindSpec::None);
        }
        match t.split_once(':') {
            Some(("rotation", c)) => Ok(WindSpec::Rotation(parse_scalar(c)?)),
            _ => Err(invalid(format!("wind: expected 'none' or 'rotation:C', got '{s}'"))),
        }
    }

    pub fn rate(&self) -> f64 {
        match *self {
            WindSpec::None => 0.0,
            WindSpec::Rotation(c) => c,
        }
    }

    pub fn field(&self) -> Result<WindField> {
        WindField::rotation(self.rate())
    }
}

/// What a subcommand needs from the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Needs {
    /// One heading, one path.
    Single,
    /// A heading fan.
    Fan,
    /// Either a single heading or a fan.
    SingleOrFan,
    /// A base point only.
    Point,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spheroid: Spheroid,
    pub wind_spec: WindSpec,
    pub wind: WindField,
    pub start: SurfacePoint,
    /// Headings to integrate: one for single runs, the fan otherwise.
    pub headings: Vec<f64>,
    pub kind: MetricKind,
    pub kinds: Vec<MetricKind>,
    pub integ: IntegratorConfig,
    pub out: PathBuf,
    pub convention: AngleConvention,
    pub view: View,
    pub segments: Vec<f64>,
    pub n: usize,
}

impl RunConfig {
    /// Validates every entry against the core preconditions. Nothing is
    /// computed or written here.
    pub fn resolve(map: &BTreeMap<String, String>, needs: Needs) -> Result<Self> {
        let get = |k: &str| map.get(k).map(String::as_str);
        let deg = get("deg").map(|v| parse_bool("deg", v)).transpose()?.unwrap_or(false);
        let compass = get("compass").map(|v| parse_bool("compass", v)).transpose()?.unwrap_or(false);

        let a = parse_scalar(get("a").ok_or_else(|| invalid("missing shape parameter 'a'"))?)?;
        let spheroid = Spheroid::new(a)?;
        let wind_spec = WindSpec::parse(get("wind").unwrap_or("none"))?;
        let wind = wind_spec.field()?;
        validate_mild(&spheroid, &wind, DEFAULT_MILD_GRID)?;

        let start = match get("start") {
            Some(s) => {
                let (phi, theta) = s
                    .split_once(',')
                    .ok_or_else(|| invalid(format!("start: expected 'phi,theta', got '{s}'")))?;
                SurfacePoint::new(parse_angle(phi, deg)?, parse_angle(theta, deg)?)
            }
            None => SurfacePoint::new(0.0, PI / 2.0),
        };
        check_chart(start.theta, POLE_EPS)
            .map_err(|e| invalid(format!("start: {e}")))?;

        let fan_keys = ["heading-start", "heading-step", "count"];
        let has_fan = fan_keys.iter().any(|k| map.contains_key(*k));
        let has_single = map.contains_key("heading");
        if has_fan && has_single {
            return Err(invalid("give either 'heading' or a fan (heading-start, heading-step, count), not both"));
        }
        let headings = match needs {
            Needs::Point => Vec::new(),
            Needs::Single if has_fan => {
                return Err(invalid("this command takes a single 'heading', not a fan"));
            }
            Needs::Fan if has_single => {
                return Err(invalid("this command takes a heading fan (heading-start, heading-step, count)"));
            }
            Needs::Single | Needs::SingleOrFan if has_single => {
                vec![parse_angle(get("heading").expect("checked"), deg)?]
            }
            Needs::Single => return Err(invalid("missing 'heading'")),
            Needs::Fan | Needs::SingleOrFan => {
                let count = parse_count("count", get("count").ok_or_else(|| invalid("missing fan 'count'"))?)?;
                if count == 0 {
                    return Err(invalid("heading fan is empty"));
                }
                let first = get("heading-start").map(|s| parse_angle(s, deg)).transpose()?.unwrap_or(0.0);
                let step = match get("heading-step") {
                    Some(s) => parse_angle(s, deg)?,
                    None => 2.0 * PI / count as f64,
                };
                heading_fan(first, step, count)
            }
        };

        let kind = get("kind").unwrap_or("randers").parse::<MetricKind>()?;
        let kinds = get("kinds")
            .unwrap_or("h,alpha,randers")
            .split(',')
            .map(str::parse::<MetricKind>)
            .collect::<Result<Vec<_>>>()?;
        for (i, k) in kinds.iter().enumerate() {
            if kinds[..i].contains(k) {
                return Err(invalid(format!("kinds: '{k}' listed twice")));
            }
        }
        if kinds.len() < 2 {
            return Err(invalid("kinds: need at least two metrics to compare"));
        }

        // paths need an end time; a point-only run integrates to the largest
        // indicatrix multiplier
        let t_end = match (get("t-end"), needs) {
            (Some(s), _) => parse_scalar(s)?,
            (None, Needs::Point) => 4.0,
            (None, _) => return Err(invalid("missing 't-end'")),
        };
        let mut integ = IntegratorConfig::new(t_end);
        if let Some(s) = get("sample-dt") {
            integ.sample_dt = parse_scalar(s)?;
        }
        if let Some(s) = get("rel-tol") {
            integ.rel_tol = parse_scalar(s)?;
        }
        if let Some(s) = get("abs-tol") {
            integ.abs_tol = parse_scalar(s)?;
        }
        if let Some(s) = get("max-step") {
            integ.max_step = parse_scalar(s)?;
        }
        integ.validate()?;

        let view = match get("view").unwrap_or("iso") {
            "iso" => View::default(),
            v => {
                let mut chars = v.chars();
                match (chars.next(), chars.next()) {
                    (Some(axis), None) => View::along_axis(axis.to_ascii_lowercase()),
                    _ => None,
                }
                .ok_or_else(|| invalid(format!("view: expected iso, x, y or z, got '{v}'")))?
            }
        };

        let segments = match get("segments") {
            Some(s) if !s.trim().is_empty() => s.split(',').map(parse_scalar).collect::<Result<Vec<_>>>()?,
            _ => Vec::new(),
        };
        if segments.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("segments must be strictly increasing"));
        }
        if segments.iter().any(|&b| b <= 0.0 || b >= t_end) {
            return Err(invalid(format!("segment boundaries must lie inside (0, {t_end})")));
        }
        if segments.len() >= znav_core::export::SEGMENT_PALETTE.len() {
            return Err(invalid(format!(
                "at most {} segment boundaries are supported",
                znav_core::export::SEGMENT_PALETTE.len() - 1
            )));
        }

        let n = get("n").map(|s| parse_count("n", s)).transpose()?.unwrap_or(360);
        if n < 3 {
            return Err(invalid(format!("n must be at least 3, got {n}")));
        }

        Ok(Self {
            spheroid,
            wind_spec,
            wind,
            start,
            headings,
            kind,
            kinds,
            integ,
            out: PathBuf::from(get("out").unwrap_or("znav-out")),
            convention: if compass {
                AngleConvention::Compass
            } else {
                AngleConvention::Parallel
            },
            view,
            segments,
            n,
        })
    }

    /// The single heading of a [`Needs::Single`] run.
    pub fn heading(&self) -> f64 {
        self.headings[0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
    }

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi/3", false).unwrap(), FRAC_PI_3);
        assert_eq!(parse_angle("pi/3", true).unwrap(), FRAC_PI_3);
        assert_eq!(parse_angle("-2pi/3", false).unwrap(), -2.0 * PI / 3.0);
        assert_eq!(parse_angle("2*pi", false).unwrap(), 2.0 * PI);
        assert_eq!(parse_angle("PI", false).unwrap(), PI);
        assert_eq!(parse_angle("60", true).unwrap(), 60f64.to_radians());
        assert_eq!(parse_angle("1.5", false).unwrap(), 1.5);
        for bad in ["", "pie", "pi/x", "pi*2", "x", "1/0"] {
            assert!(parse_angle(bad, false).is_err(), "{bad}");
        }
    }

    #[test]
    fn scalars_accept_fractions() {
        assert_eq!(parse_scalar("5/7").unwrap(), 5.0 / 7.0);
        assert_eq!(parse_scalar(" 0.75 ").unwrap(), 0.75);
        assert_eq!(parse_scalar("1e-9").unwrap(), 1e-9);
        assert!(parse_scalar("nan").is_err());
        assert!(parse_scalar("inf").is_err());
    }

    #[test]
    fn config_file_syntax() {
        let m = parse_config("# fixture\na = 3/4\nt_end = 7  # trailing\n\nwind=rotation:5/7\n").unwrap();
        assert_eq!(m["a"], "3/4");
        assert_eq!(m["t-end"], "7");
        assert_eq!(m["wind"], "rotation:5/7");
        assert!(parse_config("speed = 3").is_err());
        assert!(parse_config("a 3").is_err());
        assert!(parse_config("a = 1\na = 2").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "a = 0.5\nt-end = 3\n").unwrap();
        let args = RunArgs {
            config: Some(path),
            a: Some("0.75".into()),
            ..Default::default()
        };
        let m = args.merged().unwrap();
        assert_eq!(m["a"], "0.75");
        assert_eq!(m["t-end"], "3");
    }

    #[test]
    fn resolves_the_worked_example() {
        let m = map(&[("a", "3/4"), ("wind", "rotation:5/7"), ("heading", "pi/3"), ("t-end", "7")]);
        let cfg = RunConfig::resolve(&m, Needs::Single).unwrap();
        assert_eq!(cfg.spheroid.a(), 0.75);
        assert_eq!(cfg.wind_spec, WindSpec::Rotation(5.0 / 7.0));
        assert_eq!(cfg.heading(), FRAC_PI_3);
        assert_eq!(cfg.start, SurfacePoint::new(0.0, PI / 2.0));
        assert_eq!(cfg.integ.sample_count(), 701);
        assert_eq!(cfg.kind, MetricKind::Randers);
    }

    #[test]
    fn fan_defaults_to_a_full_turn() {
        let m = map(&[("a", "1"), ("count", "8"), ("t-end", "1")]);
        let cfg = RunConfig::resolve(&m, Needs::Fan).unwrap();
        assert_eq!(cfg.headings.len(), 8);
        assert_eq!(cfg.headings[2], PI / 2.0);
    }

    #[test]
    fn rejects_invalid_configs() {
        let base = [("a", "0.75"), ("heading", "1"), ("t-end", "1")];
        let with = |extra: &[(&str, &str)]| {
            let mut m = map(&base);
            for (k, v) in extra {
                m.insert(k.to_string(), v.to_string());
            }
            RunConfig::resolve(&m, Needs::Single)
        };
        assert!(with(&[]).is_ok());
        assert!(matches!(with(&[("a", "0")]), Err(Error::InvalidShape(_))));
        assert!(matches!(with(&[("wind", "rotation:1.2")]), Err(Error::NotMild { .. })));
        assert!(matches!(with(&[("start", "0,0")]), Err(Error::InvalidConfig(_))));
        assert!(with(&[("wind", "breeze")]).is_err());
        assert!(with(&[("t-end", "-1")]).is_err());
        assert!(with(&[("sample-dt", "2")]).is_err());
        assert!(with(&[("count", "3")]).is_err());
        assert!(with(&[("segments", "0.5,0.2")]).is_err());
        assert!(with(&[("segments", "0.2,0.4,0.6,0.8")]).is_err());
        assert!(with(&[("view", "w")]).is_err());
        assert!(with(&[("kind", "euclid")]).is_err());
        assert!(with(&[("kinds", "h")]).is_err());
        assert!(with(&[("kinds", "h,h")]).is_err());
        assert!(with(&[("deg", "maybe")]).is_err());

        let empty = map(&[("a", "0.75"), ("count", "0"), ("t-end", "1")]);
        assert!(RunConfig::resolve(&empty, Needs::Fan).is_err());
        let point = map(&[("a", "0.75"), ("n", "2")]);
        assert!(RunConfig::resolve(&point, Needs::Point).is_err());
    }
}
