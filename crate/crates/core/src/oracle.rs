//! Brute-force reference: the two-level system plus a handful of discretized
//! bath modes, evolved exactly in a truncated Fock space.
//!
//! The total Hamiltonian is real symmetric, so one dense eigendecomposition
//! gives the state at every time. Expectation values reduce to
//! `⟨O⟩(t) = Σ_jk Õ_jk R_jk cos((E_j − E_k) t)` with `Õ`, `R` the observable
//! and initial state in the eigenbasis.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{OttoError, Result};
use crate::kernels::ReservoirSpec;
use crate::state::DiagonalState;

pub const MAX_DIMENSION: usize = 1 << 15;
pub const TRUNCATION_THRESHOLD: f64 = 1e-4;
pub const THERMAL_WEIGHT_CUTOFF: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedBath {
    pub frequencies: Vec<f64>,
    pub couplings: Vec<f64>,
    /// Highest Fock level kept per mode.
    pub fock_cutoff: usize,
    pub temperature: f64,
}

impl DiscretizedBath {
    pub fn modes(&self) -> usize {
        self.frequencies.len()
    }

    pub fn bath_dimension(&self) -> usize {
        (self.fock_cutoff + 1).pow(self.modes() as u32)
    }

    pub fn dimension(&self) -> usize {
        2 * self.bath_dimension()
    }

    /// `Σ_k |g_k|²`.
    pub fn total_weight(&self) -> f64 {
        self.couplings.iter().map(|g| g * g).sum()
    }
}

/// `∫_0^x λ ω e^{−ω/Ω} dω`.
fn ohmic_primitive(x: f64, spec: &ReservoirSpec<f64>) -> f64 {
    let u = x / spec.cutoff;
    spec.coupling * spec.cutoff * spec.cutoff * (-(-u).exp_m1() - u * (-u).exp())
}

/// `N` equal bins on `(0, ω_max]`, one mode at each bin midpoint carrying the
/// spectral weight of its bin.
pub fn discretize_bath(
    spec: &ReservoirSpec<f64>,
    modes: usize,
    omega_max: f64,
    fock_cutoff: usize,
) -> Result<DiscretizedBath> {
    if modes == 0 || fock_cutoff == 0 || !(omega_max > 0.0) {
        return Err(OttoError::InvalidParams(format!(
            "bath discretization needs N >= 1, M >= 1, omega_max > 0 (got {modes}, {fock_cutoff}, {omega_max})"
        )));
    }
    let width = omega_max / modes as f64;
    let mut frequencies = Vec::with_capacity(modes);
    let mut couplings = Vec::with_capacity(modes);
    for k in 0..modes {
        let lo = k as f64 * width;
        let hi = (k + 1) as f64 * width;
        frequencies.push(0.5 * (lo + hi));
        let weight = ohmic_primitive(hi, spec) - ohmic_primitive(lo, spec);
        couplings.push(weight.max(0.0).sqrt());
    }
    Ok(DiscretizedBath {
        frequencies,
        couplings,
        fock_cutoff,
        temperature: spec.temperature,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWarning {
    pub mode: usize,
    pub top_population: f64,
}

/// Energy changes of system, bath, and interaction at the requested times.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRun {
    pub times: Vec<f64>,
    pub system_change: Vec<f64>,
    pub reservoir_change: Vec<f64>,
    pub interaction: Vec<f64>,
    pub truncation: Option<TruncationWarning>,
}

/// Diagonalized composite system with the initial state and observables
/// transformed to the eigenbasis.
pub struct ExactEvolution {
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
    state: DMatrix<f64>,
    // Õ ∘ R for H_S, H_B, H_I
    weighted: [DMatrix<f64>; 3],
    initial: [f64; 3],
    truncation: Option<TruncationWarning>,
}

fn occupations(mut index: usize, modes: usize, levels: usize) -> Vec<usize> {
    let mut occ = vec![0; modes];
    for k in (0..modes).rev() {
        occ[k] = index % levels;
        index /= levels;
    }
    occ
}

impl ExactEvolution {
    pub fn new(init: DiagonalState<f64>, splitting: f64, bath: &DiscretizedBath) -> Result<Self> {
        let dim = bath.dimension();
        if dim > MAX_DIMENSION {
            return Err(OttoError::OracleTooLarge {
                dimension: dim,
                limit: MAX_DIMENSION,
            });
        }
        let modes = bath.modes();
        let levels = bath.fock_cutoff + 1;
        let db = bath.bath_dimension();
        let occ: Vec<Vec<usize>> = (0..db).map(|b| occupations(b, modes, levels)).collect();
        let stride: Vec<usize> = (0..modes)
            .map(|k| levels.pow((modes - 1 - k) as u32))
            .collect();

        // Truncated Gibbs factors per mode.
        let mut gibbs = Vec::with_capacity(modes);
        let mut truncation: Option<TruncationWarning> = None;
        for (k, &eps) in bath.frequencies.iter().enumerate() {
            let raw: Vec<f64> = (0..levels)
                .map(|n| (-(n as f64) * eps / bath.temperature).exp())
                .collect();
            let z: f64 = raw.iter().sum();
            let p: Vec<f64> = raw.iter().map(|x| x / z).collect();
            let top = p[levels - 1];
            if top > TRUNCATION_THRESHOLD && truncation.is_none_or(|w| top > w.top_population) {
                truncation = Some(TruncationWarning {
                    mode: k,
                    top_population: top,
                });
            }
            gibbs.push(p);
        }

        let mut bath_weights: Vec<f64> = occ
            .iter()
            .map(|o| o.iter().enumerate().map(|(k, &n)| gibbs[k][n]).product())
            .collect();
        for w in bath_weights.iter_mut() {
            if *w < THERMAL_WEIGHT_CUTOFF {
                *w = 0.0;
            }
        }
        let kept: f64 = bath_weights.iter().sum();
        for w in bath_weights.iter_mut() {
            *w /= kept;
        }

        let diag_system: Vec<f64> = (0..dim)
            .map(|i| {
                if i < db {
                    -0.5 * splitting
                } else {
                    0.5 * splitting
                }
            })
            .collect();
        let diag_bath: Vec<f64> = (0..dim)
            .map(|i| {
                occ[i % db]
                    .iter()
                    .zip(&bath.frequencies)
                    .map(|(&n, &e)| n as f64 * e)
                    .sum()
            })
            .collect();
        let weights: Vec<f64> = (0..dim)
            .map(|i| {
                let s = if i < db { init.rho00 } else { init.rho11 };
                s * bath_weights[i % db]
            })
            .collect();

        // σ_x ⊗ Σ g_k (b_k + b_k†), stored as a row list.
        let mut coupling_rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); dim];
        for (i, row) in coupling_rows.iter_mut().enumerate() {
            let (s, b) = (i / db, i % db);
            let partner = (1 - s) * db;
            for k in 0..modes {
                let n = occ[b][k];
                let g = bath.couplings[k];
                if n + 1 < levels {
                    row.push((partner + b + stride[k], g * ((n + 1) as f64).sqrt()));
                }
                if n > 0 {
                    row.push((partner + b - stride[k], g * (n as f64).sqrt()));
                }
            }
        }

        let mut hamiltonian = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            hamiltonian[(i, i)] = diag_system[i] + diag_bath[i];
            for &(j, v) in &coupling_rows[i] {
                hamiltonian[(i, j)] += v;
            }
        }
        let eig = SymmetricEigen::new(hamiltonian);
        let vectors = eig.eigenvectors;
        let energies = eig.eigenvalues;

        let conjugate_diag = |d: &[f64]| {
            let mut scaled = vectors.clone();
            for (i, mut row) in scaled.row_iter_mut().enumerate() {
                row *= d[i];
            }
            vectors.transpose() * scaled
        };
        let state = conjugate_diag(&weights);
        let sys = conjugate_diag(&diag_system);
        let bth = conjugate_diag(&diag_bath);
        let mut coupled = DMatrix::<f64>::zeros(dim, dim);
        for i in 0..dim {
            for &(j, v) in &coupling_rows[i] {
                for c in 0..dim {
                    coupled[(i, c)] += v * vectors[(j, c)];
                }
            }
        }
        let int = vectors.transpose() * coupled;

        let weighted = [
            sys.component_mul(&state),
            bth.component_mul(&state),
            int.component_mul(&state),
        ];
        let mut evo = Self {
            energies,
            vectors,
            state,
            weighted,
            initial: [0.0; 3],
            truncation,
        };
        evo.initial = evo.expectations(0.0);
        Ok(evo)
    }

    pub fn dimension(&self) -> usize {
        self.energies.len()
    }

    pub fn truncation(&self) -> Option<TruncationWarning> {
        self.truncation
    }

    /// `(⟨H_S⟩, ⟨H_B⟩, ⟨H_I⟩)` at time `t`.
    pub fn expectations(&self, t: f64) -> [f64; 3] {
        let c = self.energies.map(|e| (e * t).cos());
        let s = self.energies.map(|e| (e * t).sin());
        let quad = |m: &DMatrix<f64>| c.dot(&(m * &c)) + s.dot(&(m * &s));
        [
            quad(&self.weighted[0]),
            quad(&self.weighted[1]),
            quad(&self.weighted[2]),
        ]
    }

    /// `(ΔE_S, ΔE_B, E_I)` relative to the factorized start.
    pub fn energy_changes(&self, t: f64) -> [f64; 3] {
        let e = self.expectations(t);
        [
            e[0] - self.initial[0],
            e[1] - self.initial[1],
            e[2] - self.initial[2],
        ]
    }

    /// Full density matrix in the product basis (system ⊗ bath, system major).
    pub fn density_matrix(&self, t: f64) -> DMatrix<Complex64> {
        let n = self.dimension();
        let phase: Vec<Complex64> = self
            .energies
            .iter()
            .map(|&e| Complex64::from_polar(1.0, -e * t))
            .collect();
        let rotated =
            DMatrix::from_fn(n, n, |j, k| self.state[(j, k)] * phase[j] * phase[k].conj());
        let v = self.vectors.map(|x| Complex64::new(x, 0.0));
        &v * rotated * v.transpose()
    }
}

/// Exact energy changes for the system starting in `init` and the bath in
/// its truncated Gibbs state.
pub fn exact_evolve(
    init: DiagonalState<f64>,
    splitting: f64,
    bath: &DiscretizedBath,
    times: &[f64],
) -> Result<ExactRun> {
    let evo = ExactEvolution::new(init, splitting, bath)?;
    let mut run = ExactRun {
        times: times.to_vec(),
        system_change: Vec::with_capacity(times.len()),
        reservoir_change: Vec::with_capacity(times.len()),
        interaction: Vec::with_capacity(times.len()),
        truncation: evo.truncation(),
    };
    for &t in times {
        let [s, b, i] = evo.energy_changes(t);
        run.system_change.push(s);
        run.reservoir_change.push(b);
        run.interaction.push(i);
    }
    Ok(run)
}
