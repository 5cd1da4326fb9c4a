//! Run configuration: a flat TOML file merged with command-line flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{has_chirality, CliffordSpec, Multiplicity};
use crate::error::{Error, Result};
use crate::sampling::DEFAULT_SEED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Csv,
    /// Pretty-printed JSON.
    #[value(alias = "structured")]
    #[serde(alias = "structured")]
    Json,
}

/// Parses `"n"` or `"p+m"`. A bare `n` for `k ≡ 3 (mod 4)` means `n+0`.
pub fn parse_multiplicity(k: usize, text: &str) -> Result<Multiplicity> {
    let number = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("bad multiplicity {text:?}")))
    };
    let mult = match text.split_once('+') {
        Some((p, m)) => {
            if !has_chirality(k) {
                return Err(Error::Config(format!(
                    "k = {k} has no chirality; use a plain multiplicity instead of {text:?}"
                )));
            }
            Multiplicity::Chiral {
                plus: number(p)?,
                minus: number(m)?,
            }
        }
        None if has_chirality(k) => Multiplicity::Chiral {
            plus: number(text)?,
            minus: 0,
        },
        None => Multiplicity::Single(number(text)?),
    };
    Ok(mult)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum MultValue {
    Count(usize),
    Text(String),
}

/// Everything a config file may set.
#[derive(Debug, Clone, Default, Deserialize)]
struct FileConfig {
    k: Option<usize>,
    mult: Option<MultValue>,
    seed: Option<u64>,
    format: Option<Format>,
    #[serde(flatten)]
    tol: ToleranceOverrides,
    #[serde(flatten)]
    grid: GridOverrides,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Center dimension.
    #[arg(long)]
    pub k: Option<usize>,
    /// Module multiplicity: `n`, or `p+m` for the two chiralities when k = 3 (mod 4).
    #[arg(long)]
    pub mult: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat TOML file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Record wall time per check (makes output nondeterministic).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub tol: ToleranceOverrides,
    #[command(flatten)]
    pub grid: GridOverrides,
}

macro_rules! overrides {
    ($(#[$meta:meta])* $name:ident, $resolved:ident { $($field:ident : $ty:ty = $default:expr, $doc:literal;)* }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Default, Args, Deserialize)]
        pub struct $name {
            $(
                #[doc = $doc]
                #[arg(long)]
                #[serde(default)]
                pub $field: Option<$ty>,
            )*
        }

        #[derive(Debug, Clone, PartialEq, Serialize)]
        pub struct $resolved {
            $(#[doc = $doc] pub $field: $ty,)*
        }

        impl Default for $resolved {
            fn default() -> Self {
                Self { $($field: $default,)* }
            }
        }

        impl $name {
            const FIELDS: &'static [&'static str] = &[$(stringify!($field)),*];

            /// Fields set here win over `base`.
            fn or(self, base: Self) -> Self {
                Self { $($field: self.$field.or(base.$field),)* }
            }

            fn resolve(self) -> $resolved {
                let d = $resolved::default();
                $resolved { $($field: self.$field.unwrap_or(d.$field),)* }
            }
        }
    };
}

overrides!(ToleranceOverrides, Tolerances {
    tol_clifford: f64 = 1e-12, "Clifford relations and J_Z² = -|Z|²";
    tol_group: f64 = 1e-12, "group law residuals";
    tol_haar: f64 = 1e-8, "relative Haar Jacobian error";
    tol_cayley: f64 = 1e-10, "Cayley round trips";
    tol_chart: f64 = 1e-6, "chart differential at the identity";
    tol_closed_form: f64 = 1e-10, "agreement of the two closed forms of the density";
    tol_density: f64 = 1e-5, "relative volume density error";
    tol_spread: f64 = 1e-6, "relative spread of the density over directions";
    tol_geodesic: f64 = 1e-6, "transverse geodesic deviation";
    tol_distance: f64 = 1e-5, "geodesic distance error";
    tol_harmonic: f64 = 1e-4, "Laplacian spread and radial mismatch";
    tol_symmetric: f64 = 1e-8, "‖∇R‖/‖R‖ below which a space is symmetric";
    tol_nonsymmetric: f64 = 1e-3, "‖∇R‖/‖R‖ above which a space is nonsymmetric";
    tol_subalgebra: f64 = 1e-12, "second fundamental form of the subalgebras";
    tol_sectional: f64 = 1e-10, "subalgebra sectional curvatures";
    tol_mass: f64 = 1e-4, "relative heat mass drift";
    tol_positivity: f64 = 1e-10, "allowed negative undershoot of the heat solution";
});

overrides!(GridOverrides, Grid {
    rho_max: f64 = 3.0, "largest distance sampled (density) or outer radius (heat, default 12)";
    samples: usize = 50, "radial samples for density";
    directions: usize = 8, "random directions per sweep";
    points: usize = 1000, "random points for group and model sweeps";
    length: f64 = 2.0, "geodesic arc length";
    step: f64 = 1e-3, "geodesic step";
    t_end: f64 = 1.0, "heat end time";
    n_grid: usize = 601, "heat grid nodes";
    n_steps: usize = 1000, "heat time steps";
    n: usize = 5, "table rows are expanded for n = 0..N";
});

/// Fully resolved configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpaceConfig {
    pub k: usize,
    pub mult: String,
    pub seed: u64,
    pub format: Format,
    pub tolerances: Tolerances,
    pub grid: Grid,
    #[serde(skip)]
    pub spec: CliffordSpec,
    #[serde(skip)]
    pub timings: bool,
    /// Whether `--rho-max` was given, so that heat can keep its own default.
    #[serde(skip)]
    pub rho_max_set: bool,
}

impl SpaceConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let k = args.k.or(file.k).unwrap_or(2);
        let mult_text = match (&args.mult, file.mult) {
            (Some(s), _) => s.clone(),
            (None, Some(MultValue::Text(s))) => s,
            (None, Some(MultValue::Count(n))) => n.to_string(),
            (None, None) => "1".to_string(),
        };
        let multiplicity = parse_multiplicity(k, &mult_text)?;
        let spec = CliffordSpec::new(k, multiplicity).map_err(|e| Error::Config(e.to_string()))?;
        let grid_overrides = args.grid.clone().or(file.grid);
        let rho_max_set = grid_overrides.rho_max.is_some();
        let config = Self {
            k,
            mult: multiplicity.to_string(),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            format: args.format.or(file.format).unwrap_or_default(),
            tolerances: args.tol.clone().or(file.tol).resolve(),
            grid: grid_overrides.resolve(),
            spec,
            timings: args.timings,
            rho_max_set,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        let t = &self.tolerances;
        let tols = [
            t.tol_clifford,
            t.tol_group,
            t.tol_haar,
            t.tol_cayley,
            t.tol_chart,
            t.tol_closed_form,
            t.tol_density,
            t.tol_spread,
            t.tol_geodesic,
            t.tol_distance,
            t.tol_harmonic,
            t.tol_symmetric,
            t.tol_nonsymmetric,
            t.tol_subalgebra,
            t.tol_sectional,
            t.tol_mass,
            t.tol_positivity,
        ];
        if tols.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if t.tol_symmetric >= t.tol_nonsymmetric || t.tol_nonsymmetric >= 1.0 {
            return Err(Error::Config(
                "need tol_symmetric < tol_nonsymmetric < 1".into(),
            ));
        }
        let g = &self.grid;
        if !(g.rho_max > 0.0 && g.length > 0.0 && g.step > 0.0 && g.t_end > 0.0) {
            return Err(Error::Config("grid lengths must be positive".into()));
        }
        if g.samples == 0 || g.points == 0 || g.n_steps == 0 || g.n_grid < 3 {
            return Err(Error::Config(
                "need samples, points, n_steps >= 1 and n_grid >= 3".into(),
            ));
        }
        if g.directions < 8 {
            return Err(Error::Config("need at least 8 directions".into()));
        }
        Ok(())
    }
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let bad = |e: String| Error::Config(format!("{}: {e}", path.display()));
    let table: toml::Table = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
    // serde cannot reject unknown keys through flattened structs
    for key in table.keys() {
        let known = ["k", "mult", "seed", "format"].contains(&key.as_str())
            || ToleranceOverrides::FIELDS.contains(&key.as_str())
            || GridOverrides::FIELDS.contains(&key.as_str());
        if !known {
            return Err(bad(format!("unknown key {key:?}")));
        }
    }
    table
        .try_into()
        .map_err(|e: toml::de::Error| bad(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicity_syntax() {
        assert_eq!(parse_multiplicity(2, "3").unwrap(), Multiplicity::Single(3));
        assert_eq!(
            parse_multiplicity(3, "1+1").unwrap(),
            Multiplicity::Chiral { plus: 1, minus: 1 }
        );
        assert_eq!(
            parse_multiplicity(7, "2").unwrap(),
            Multiplicity::Chiral { plus: 2, minus: 0 }
        );
        assert!(parse_multiplicity(2, "1+1").is_err());
        assert!(parse_multiplicity(2, "x").is_err());
    }

    #[test]
    fn file_values_are_overridden_by_flags() {
        let dir = std::env::temp_dir().join(format!("htype-config-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(
            &path,
            "k = 3\nmult = \"1+1\"\nseed = 9\ntol_harmonic = 1e-3\nsamples = 7\n",
        )
        .unwrap();
        let args = CommonArgs {
            config: Some(path.clone()),
            seed: Some(11),
            ..Default::default()
        };
        let c = SpaceConfig::from_args(&args).unwrap();
        assert_eq!((c.k, c.mult.as_str(), c.seed), (3, "1+1", 11));
        assert_eq!(c.tolerances.tol_harmonic, 1e-3);
        assert_eq!(c.grid.samples, 7);

        std::fs::write(&path, "k = 2\nbogus = 1\n").unwrap();
        assert!(matches!(
            SpaceConfig::from_args(&args),
            Err(Error::Config(_))
        ));
        std::fs::write(&path, "tol_mass = -1.0\n").unwrap();
        assert!(matches!(
            SpaceConfig::from_args(&args),
            Err(Error::Config(_))
        ));
        std::fs::remove_dir_all(dir).ok();
    }
}
