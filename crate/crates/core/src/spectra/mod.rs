//! Momentum-grid scans over configured channels.

pub mod config;
pub mod emit;
pub mod preset;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::correlation::{
    a2_yield_at, angular_combo, crude_distribution, ChannelTransition, CorrelationOptions, MultipoleTerm,
};
use crate::direct::{direct_yield_at, DirectOptions, OrbitalSpec, SlowFactors};
use crate::error::{Error, Result};
use crate::field::{saddle_solve, LaserField};
use crate::types::Momentum;

pub use config::{Mode, OutputFormat, ScanConfig};
pub use emit::{emit, SpectrumRecord};
pub use preset::co2_preset;

/// Grid points in output order: `p_par` outer, `p_perp` middle, `phi_p` inner.
pub fn grid_points(cfg: &ScanConfig) -> Vec<Momentum> {
    let phis = cfg.grid.phi_p.values();
    let perps = cfg.grid.p_perp.values();
    let mut out = Vec::with_capacity(phis.len() * perps.len());
    for p_par in cfg.grid.p_par.values() {
        for &p_perp in &perps {
            for &phi in &phis {
                out.push(Momentum::new(p_par, p_perp, phi));
            }
        }
    }
    out
}

/// A channel ready for evaluation.
#[derive(Debug, Clone)]
pub struct PreparedChannel {
    pub tag: String,
    pub energy: f64,
    pub orbital: OrbitalSpec,
    /// Transitions into this channel, one per coupling.
    pub incoming: Vec<ChannelTransition>,
}

pub fn build_field(cfg: &ScanConfig) -> Result<LaserField> {
    LaserField::monochromatic(cfg.field.f0, cfg.field.omega, cfg.field.phase)
        .map_err(|e| Error::Config(format!("field: {e}")))
}

pub fn prepare_channels(cfg: &ScanConfig) -> Result<Vec<PreparedChannel>> {
    let orbital_of = |tag: &str| -> Result<(f64, OrbitalSpec)> {
        let ch = cfg
            .channel(tag)
            .ok_or_else(|| Error::Config(format!("unknown channel '{tag}'")))?;
        let o = &ch.orbital;
        let orb = OrbitalSpec::from_ip(o.l, o.m, ch.ipn, o.c_kl, o.q)
            .map_err(|e| Error::Config(format!("channel {tag}: {e}")))?;
        Ok((ch.energy, orb))
    };
    cfg.channels
        .iter()
        .map(|ch| {
            let (energy, orbital) = orbital_of(&ch.tag)?;
            let incoming = ch
                .couplings
                .iter()
                .map(|cp| {
                    let (e_n, src_orb) = orbital_of(&cp.from)?;
                    let terms = cp
                        .multipoles
                        .iter()
                        .map(|mp| MultipoleTerm::constant(mp.lambda, mp.mu, Complex64::new(mp.q_re, mp.q_im)))
                        .collect::<Result<Vec<_>>>()?;
                    ChannelTransition::new(energy, e_n, src_orb.ipn(), src_orb, terms)
                        .map_err(|e| Error::Config(format!("channel {} from {}: {e}", ch.tag, cp.from)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(PreparedChannel {
                tag: ch.tag.clone(),
                energy,
                orbital,
                incoming,
            })
        })
        .collect()
}

pub fn direct_options(cfg: &ScanConfig) -> DirectOptions {
    DirectOptions {
        burst: cfg.field.burst,
        coulomb_correction: cfg.toggles.coulomb_correction,
        sign_toggle: cfg.toggles.sign_toggle,
    }
}

pub fn correlation_options(cfg: &ScanConfig) -> CorrelationOptions {
    CorrelationOptions {
        burst: cfg.field.burst,
        j_max: cfg.toggles.j_max,
        d_table: cfg.toggles.d_table.clone(),
        sign_toggle: cfg.toggles.sign_toggle,
        damping: cfg.toggles.damping,
        inner_radius: cfg.toggles.inner_radius,
    }
}

fn record(p: &Momentum, value: Result<Complex64>, tag: &str) -> SpectrumRecord {
    match value {
        Ok(a) => SpectrumRecord::new(p, a, tag),
        Err(e) => SpectrumRecord::new(
            p,
            Complex64::new(f64::NAN, f64::NAN),
            format!("{tag}#error:{}", e.tag()),
        ),
    }
}

fn direct_amplitude(
    ch: &PreparedChannel,
    p: &Momentum,
    field: &LaserField,
    cfg: &ScanConfig,
) -> Result<Complex64> {
    let opts = direct_options(cfg);
    let saddle = saddle_solve(field, p, ch.orbital.ipn(), opts.burst)?;
    let slow = SlowFactors::default();
    direct_yield_at(
        &ch.orbital,
        ch.energy,
        p,
        field,
        &slow,
        cfg.field.t_final,
        &opts,
        &saddle,
    )
    .map(|a| a.value())
}

fn correlation_amplitude(
    ch: &PreparedChannel,
    p: &Momentum,
    field: &LaserField,
    cfg: &ScanConfig,
) -> Result<Complex64> {
    let opts = correlation_options(cfg);
    let mut total = Complex64::new(0.0, 0.0);
    for tr in &ch.incoming {
        let saddle = saddle_solve(field, p, tr.ipn, opts.burst)?;
        total += a2_yield_at(
            p,
            tr,
            field,
            cfg.field.t_final,
            cfg.toggles.quad_points,
            &opts,
            &saddle,
        )?
        .value();
    }
    Ok(total)
}

fn point_records(
    p: &Momentum,
    cfg: &ScanConfig,
    field: &LaserField,
    channels: &[PreparedChannel],
) -> Vec<SpectrumRecord> {
    let mut out = Vec::new();
    match cfg.mode {
        Mode::CrudeFigure => {
            let crude = cfg.crude.as_ref().expect("validated crude section");
            for &[m, mu] in &crude.combos {
                let combo = angular_combo(m, mu);
                let v = crude_distribution(&combo, crude.tau_t, p.p_perp, crude.delta_ip);
                out.push(SpectrumRecord::new(p, Complex64::new(v, 0.0), crude_tag(m, mu)));
            }
        }
        Mode::Direct => {
            for ch in channels {
                out.push(record(
                    p,
                    direct_amplitude(ch, p, field, cfg),
                    &format!("{}:direct", ch.tag),
                ));
            }
        }
        Mode::Correlation => {
            for ch in channels.iter().filter(|c| !c.incoming.is_empty()) {
                let a = correlation_amplitude(ch, p, field, cfg);
                out.push(record(p, a, &format!("{}:correlation", ch.tag)));
            }
        }
        Mode::Both => {
            for ch in channels {
                let d = direct_amplitude(ch, p, field, cfg);
                let c = if ch.incoming.is_empty() {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    correlation_amplitude(ch, p, field, cfg)
                };
                let sum = match (&d, &c) {
                    (Ok(a), Ok(b)) => Ok(a + b),
                    (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                };
                out.push(record(p, d, &format!("{}:direct", ch.tag)));
                out.push(record(p, c, &format!("{}:correlation", ch.tag)));
                out.push(record(p, sum, &format!("{}:sum", ch.tag)));
            }
        }
    }
    out
}

/// Tag of a crude-figure panel. Colons keep the CSV free of quoting.
pub fn crude_tag(m: i32, mu: i32) -> String {
    format!("crude:m={m}:mu={mu}")
}

/// Evaluates the configured amplitudes on every grid point.
///
/// Points are computed in parallel; the output order is fixed by the grid.
/// A point whose evaluation fails becomes a NaN row whose tag carries
/// `#error:<kind>`.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<SpectrumRecord>> {
    cfg.validate()?;
    let field = build_field(cfg)?;
    let channels = prepare_channels(cfg)?;
    let points = grid_points(cfg);
    let per_point: Vec<Vec<SpectrumRecord>> = points
        .par_iter()
        .map(|p| point_records(p, cfg, &field, &channels))
        .collect();
    Ok(per_point.into_iter().flatten().collect())
}
