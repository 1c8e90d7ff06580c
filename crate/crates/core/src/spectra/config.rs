//! Scan configuration, read from TOML.
//!
//! ```toml
//! mode = "both"                 # direct | correlation | both | crude_figure
//!
//! [field]
//! f0 = 0.05
//! omega = 0.057
//! phase = 0.0
//! burst = 0
//! t_final = 200.0
//!
//! [grid]
//! p_par = 0.0                   # or a list
//! p_perp = { min = 0.0, max = 1.0, count = 32 }
//! phi_p = { min = 0.0, max = 0.0, count = 1 }
//!
//! [output]
//! path = "out.csv"
//! format = "csv"                # csv | json
//!
//! [toggles]
//! coulomb_correction = false
//! sign_toggle = 1
//! j_max = 0
//! quad_points = 32
//! d_table = []                  # D_1, D_2, ...
//! damping = "published"         # published | current_work
//!
//! [[channels]]
//! tag = "X"
//! energy = 0.0
//! ipn = 0.5064
//! orbital = { l = 2, m = 1, c_kl = 1.0, q = 1.0 }
//!
//! [[channels]]
//! tag = "B"
//! energy = 0.158
//! ipn = 0.6644
//! orbital = { l = 1, m = 0, c_kl = 1.0, q = 1.0 }
//! [[channels.couplings]]
//! from = "X"
//! multipoles = [{ lambda = 1, mu = 1, q_re = 1.0, q_im = 0.0 }]
//! ```
//!
//! A coupling listed under channel `B` with `from = "X"` is the transition
//! in which the electron tunnels out of `X` and the ion ends in `B`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::correlation::DampingConvention;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Direct,
    Correlation,
    Both,
    CrudeFigure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub f0: f64,
    pub omega: f64,
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub burst: i32,
    pub t_final: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Range {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.min + i as f64 * step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParallelGrid {
    Single(f64),
    List(Vec<f64>),
}

impl ParallelGrid {
    pub fn values(&self) -> Vec<f64> {
        match self {
            ParallelGrid::Single(v) => vec![*v],
            ParallelGrid::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub p_par: ParallelGrid,
    pub p_perp: Range,
    pub phi_p: Range,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_sign() -> i8 {
    1
}

fn default_quad_points() -> usize {
    32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Toggles {
    #[serde(default)]
    pub coulomb_correction: bool,
    #[serde(default = "default_sign")]
    pub sign_toggle: i8,
    #[serde(default)]
    pub j_max: u32,
    #[serde(default = "default_quad_points")]
    pub quad_points: usize,
    #[serde(default)]
    pub d_table: Vec<f64>,
    #[serde(default)]
    pub damping: DampingConvention,
    /// Inner cutoff radius of the `ξ` contour; defaults to `1/κ`.
    #[serde(default)]
    pub inner_radius: Option<f64>,
}

impl Default for Toggles {
    fn default() -> Self {
        Self {
            coulomb_correction: false,
            sign_toggle: 1,
            j_max: 0,
            quad_points: default_quad_points(),
            d_table: Vec::new(),
            damping: DampingConvention::Published,
            inner_radius: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrbitalConfig {
    pub l: u32,
    pub m: i32,
    pub c_kl: f64,
    #[serde(default)]
    pub q: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultipoleConfig {
    pub lambda: u32,
    pub mu: i32,
    pub q_re: f64,
    #[serde(default)]
    pub q_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    pub from: String,
    pub multipoles: Vec<MultipoleConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    pub tag: String,
    /// Ionic energy `E_n` relative to the ionic ground state.
    #[serde(default)]
    pub energy: f64,
    pub ipn: f64,
    pub orbital: OrbitalConfig,
    #[serde(default)]
    pub couplings: Vec<CouplingConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrudeConfig {
    pub tau_t: f64,
    pub delta_ip: f64,
    /// `(m, μ)` pairs, one panel each.
    pub combos: Vec<[i32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub mode: Mode,
    pub field: FieldConfig,
    pub grid: GridConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub toggles: Toggles,
    #[serde(default)]
    pub channels: Vec<ChannelConfig>,
    #[serde(default)]
    pub crude: Option<CrudeConfig>,
}

fn bad(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("{field}: {msg}"))
}

fn check_range(name: &str, r: &Range, nonneg: bool) -> Result<()> {
    if r.count < 1 {
        return Err(bad(&format!("grid.{name}.count"), "must be at least 1"));
    }
    if !r.min.is_finite() || !r.max.is_finite() {
        return Err(bad(&format!("grid.{name}"), "bounds must be finite"));
    }
    if r.max < r.min {
        return Err(bad(
            &format!("grid.{name}"),
            format!("max {} is below min {}", r.max, r.min),
        ));
    }
    if nonneg && r.min < 0.0 {
        return Err(bad(
            &format!("grid.{name}.min"),
            format!("must be >= 0, got {}", r.min),
        ));
    }
    Ok(())
}

impl ScanConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScanConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn channel(&self, tag: &str) -> Option<&ChannelConfig> {
        self.channels.iter().find(|c| c.tag == tag)
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        if !(f.f0 > 0.0) {
            return Err(bad("field.f0", format!("must be positive, got {}", f.f0)));
        }
        if !(f.omega > 0.0) {
            return Err(bad("field.omega", format!("must be positive, got {}", f.omega)));
        }
        if !f.phase.is_finite() || !f.t_final.is_finite() {
            return Err(bad("field", "phase and t_final must be finite"));
        }

        if self.grid.p_par.values().is_empty() {
            return Err(bad("grid.p_par", "needs at least one value"));
        }
        if self.grid.p_par.values().iter().any(|v| !v.is_finite()) {
            return Err(bad("grid.p_par", "values must be finite"));
        }
        check_range("p_perp", &self.grid.p_perp, true)?;
        check_range("phi_p", &self.grid.phi_p, false)?;

        let t = &self.toggles;
        if t.sign_toggle != 1 && t.sign_toggle != -1 {
            return Err(bad(
                "toggles.sign_toggle",
                format!("must be +1 or -1, got {}", t.sign_toggle),
            ));
        }
        if t.quad_points < 16 {
            return Err(bad(
                "toggles.quad_points",
                format!("must be >= 16, got {}", t.quad_points),
            ));
        }
        if (t.j_max as usize) > t.d_table.len() {
            return Err(bad(
                "toggles.j_max",
                format!(
                    "j_max = {} needs {} entries in d_table (D_1..), found {}",
                    t.j_max,
                    t.j_max,
                    t.d_table.len()
                ),
            ));
        }
        if let Some(r) = t.inner_radius {
            if !(r > 0.0) {
                return Err(bad("toggles.inner_radius", format!("must be positive, got {r}")));
            }
        }

        if self.mode == Mode::CrudeFigure {
            let crude = self
                .crude
                .as_ref()
                .ok_or_else(|| bad("crude", "section required in crude_figure mode"))?;
            if !(crude.tau_t > 0.0) {
                return Err(bad(
                    "crude.tau_t",
                    format!("must be positive, got {}", crude.tau_t),
                ));
            }
            if !(crude.delta_ip >= 0.0) {
                return Err(bad(
                    "crude.delta_ip",
                    format!("must be >= 0, got {}", crude.delta_ip),
                ));
            }
            if crude.combos.is_empty() {
                return Err(bad("crude.combos", "needs at least one (m, mu) pair"));
            }
        } else if self.channels.is_empty() {
            return Err(bad("channels", "at least one channel is required"));
        }

        for (i, ch) in self.channels.iter().enumerate() {
            let at = format!("channels[{i}] ({})", ch.tag);
            if ch.tag.is_empty() {
                return Err(bad(&format!("channels[{i}].tag"), "must not be empty"));
            }
            if self.channels.iter().filter(|c| c.tag == ch.tag).count() > 1 {
                return Err(bad(&at, "duplicate tag"));
            }
            if !(ch.ipn > 0.0) {
                return Err(bad(
                    &format!("{at}.ipn"),
                    format!("must be positive, got {}", ch.ipn),
                ));
            }
            if ch.orbital.m.unsigned_abs() > ch.orbital.l {
                return Err(bad(&format!("{at}.orbital"), "|m| exceeds l"));
            }
            if !(ch.orbital.q >= 0.0) || !ch.orbital.c_kl.is_finite() {
                return Err(bad(&format!("{at}.orbital"), "need q >= 0 and finite c_kl"));
            }
            for cp in &ch.couplings {
                let src = self.channel(&cp.from).ok_or_else(|| {
                    bad(
                        &format!("{at}.couplings"),
                        format!("unknown source channel '{}'", cp.from),
                    )
                })?;
                let delta = ch.energy - src.energy;
                if delta < 0.0 {
                    return Err(bad(
                        &format!("{at}.couplings"),
                        format!("energy gap E_m - E_n = {delta} from '{}' is negative", cp.from),
                    ));
                }
                if ((ch.ipn - src.ipn) - delta).abs() > 1e-9 {
                    return Err(bad(
                        &format!("{at}.couplings"),
                        format!(
                            "ipn difference {} does not match energy difference {delta} for '{}'",
                            ch.ipn - src.ipn,
                            cp.from
                        ),
                    ));
                }
                for mp in &cp.multipoles {
                    if mp.mu.unsigned_abs() > mp.lambda {
                        return Err(bad(&format!("{at}.couplings.multipoles"), "|mu| exceeds lambda"));
                    }
                }
            }
        }
        Ok(())
    }
}
