//! Built-in carbon-dioxide scan.

use super::config::{
    ChannelConfig, CouplingConfig, CrudeConfig, FieldConfig, GridConfig, Mode, MultipoleConfig,
    OrbitalConfig, OutputConfig, ParallelGrid, Range, ScanConfig, Toggles,
};

/// X (ground) and B ionic states of CO₂⁺, ionization potentials in hartree.
pub const CO2_IP_X: f64 = 0.5064;
pub const CO2_IP_B: f64 = 0.6644;

/// Three panels of the ξ-integrated angular distribution, `ΔI_p = τ_T = 1`,
/// over `p_⊥ ∈ [0, 3]`:
///
/// * (a) `(m, μ) = (0, 0)`: no central zero, no rings;
/// * (b) `(1, 1)`: central zero of order two;
/// * (c) `(1, -1)`: no central zero, one ring.
///
/// Output is unnormalized. The physical X and B channels, with dipole
/// couplings `μ = ±1` from X to B, are carried along so the same grid can
/// drive the full correlation amplitude.
pub fn co2_preset() -> ScanConfig {
    let dipole = |mu| MultipoleConfig {
        lambda: 1,
        mu,
        q_re: 1.0,
        q_im: 0.0,
    };
    ScanConfig {
        mode: Mode::CrudeFigure,
        field: FieldConfig {
            f0: 0.05,
            omega: 0.057,
            phase: 0.0,
            burst: 0,
            t_final: 200.0,
        },
        grid: GridConfig {
            p_par: ParallelGrid::Single(0.0),
            p_perp: Range {
                min: 0.0,
                max: 3.0,
                count: 64,
            },
            phi_p: Range {
                min: 0.0,
                max: 0.0,
                count: 1,
            },
        },
        output: OutputConfig::default(),
        toggles: Toggles::default(),
        channels: vec![
            ChannelConfig {
                tag: "X".into(),
                energy: 0.0,
                ipn: CO2_IP_X,
                orbital: OrbitalConfig {
                    l: 2,
                    m: 1,
                    c_kl: 1.0,
                    q: 1.0,
                },
                couplings: vec![],
            },
            ChannelConfig {
                tag: "B".into(),
                energy: CO2_IP_B - CO2_IP_X,
                ipn: CO2_IP_B,
                orbital: OrbitalConfig {
                    l: 1,
                    m: 0,
                    c_kl: 1.0,
                    q: 1.0,
                },
                couplings: vec![CouplingConfig {
                    from: "X".into(),
                    multipoles: vec![dipole(1), dipole(-1)],
                }],
            },
        ],
        crude: Some(CrudeConfig {
            tau_t: 1.0,
            delta_ip: 1.0,
            combos: vec![[0, 0], [1, 1], [1, -1]],
        }),
    }
}
