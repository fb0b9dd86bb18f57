//! Snapshot generation for the global-basis reduction.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::mor::MorError;
use crate::physical::FullOrderModel;

/// Training input signal applied to the full model, one power value per
/// time step, with states sampled every `sample_every` steps.
#[derive(Debug, Clone)]
pub struct Excitation {
    pub powers: Vec<f64>,
    pub sample_every: usize,
}

impl Excitation {
    /// Step at `u_max` followed by a ten-pulse random-amplitude train;
    /// covers both the transient and the quasi-steady regime the closed
    /// loop visits. 200 steps sampled every 4th yields 50 snapshots.
    pub fn training_default(u_max: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut powers = vec![u_max; 50];
        for _ in 0..10 {
            let amplitude = u_max * rng.gen_range(0.2..1.0);
            powers.extend(std::iter::repeat(amplitude).take(10));
            powers.extend(std::iter::repeat(0.0).take(5));
        }
        Self {
            powers,
            sample_every: 4,
        }
    }

    pub fn n_samples(&self) -> usize {
        self.powers.len() / self.sample_every
    }
}

/// State, input-vector and output-weight snapshots over a parameter grid.
#[derive(Debug, Clone)]
pub struct SnapshotSet {
    /// Strictly increasing parameter samples.
    pub alphas: Vec<f64>,
    /// n × (len(alphas)·samples) state snapshots (K).
    pub states: DMatrix<f64>,
    /// n × len(alphas) columns b_full(α_i).
    pub input_snapshots: DMatrix<f64>,
    /// n × len(alphas) columns c_vol(α_i)ᵀ.
    pub output_snapshots: DMatrix<f64>,
}

impl SnapshotSet {
    /// True when the parameter samples bracket the given interval.
    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        match (self.alphas.first(), self.alphas.last()) {
            (Some(&a), Some(&b)) => a <= lo && b >= hi,
            _ => false,
        }
    }
}

/// Time-step the full model over the parameter grid and record snapshots.
///
/// The model's absorption scaling is swapped per parameter; the grid and
/// system matrix are shared across the sweep.
pub fn collect_snapshots(
    model: &mut FullOrderModel,
    alphas: &[f64],
    excitation: &Excitation,
    dt: f64,
) -> Result<SnapshotSet, MorError> {
    if alphas.is_empty() {
        return Err(MorError::Assembly("parameter grid is empty".into()));
    }
    if alphas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(MorError::Assembly(
            "parameter samples must be strictly increasing".into(),
        ));
    }
    if excitation.sample_every == 0 || excitation.powers.is_empty() {
        return Err(MorError::Assembly("excitation signal is empty".into()));
    }

    let n = model.n();
    let per_alpha = excitation.n_samples();
    let mut states = DMatrix::zeros(n, alphas.len() * per_alpha);
    let mut input_snapshots = DMatrix::zeros(n, alphas.len());
    let mut output_snapshots = DMatrix::zeros(n, alphas.len());

    for (ai, &alpha) in alphas.iter().enumerate() {
        model
            .set_alpha(alpha)
            .map_err(|e| MorError::Assembly(e.to_string()))?;
        for (k, v) in model.b_full.iter().enumerate() {
            input_snapshots[(k, ai)] = *v;
        }
        for (k, v) in model.c_vol.iter().enumerate() {
            output_snapshots[(k, ai)] = *v;
        }

        let mut x = vec![0.0; n];
        let mut sample = 0usize;
        for (step, &u) in excitation.powers.iter().enumerate() {
            x = model.step(&x, u, dt);
            if (step + 1) % excitation.sample_every == 0 && sample < per_alpha {
                if x.iter().any(|v| !v.is_finite()) {
                    return Err(MorError::Assembly(format!(
                        "non-finite state while exciting alpha = {alpha}"
                    )));
                }
                let col = ai * per_alpha + sample;
                for k in 0..n {
                    states[(k, col)] = x[k];
                }
                sample += 1;
            }
        }
    }

    Ok(SnapshotSet {
        alphas: alphas.to_vec(),
        states,
        input_snapshots,
        output_snapshots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::physical::{AbsorptionProfile, Geometry, MaterialConstants};

    fn small_model() -> FullOrderModel {
        FullOrderModel::assemble(
            Geometry::default(),
            MaterialConstants::default(),
            AbsorptionProfile::default(),
            8,
            16,
        )
        .unwrap()
    }

    #[test]
    fn snapshot_counts_follow_the_grid() {
        let mut model = small_model();
        let excitation = Excitation {
            powers: vec![0.05; 200],
            sample_every: 4,
        };
        let alphas = [0.3, 0.5, 0.9, 1.1, 1.5];
        let set = collect_snapshots(&mut model, &alphas, &excitation, 4e-3).unwrap();
        assert_eq!(set.states.ncols(), 5 * 50);
        assert_eq!(set.input_snapshots.ncols(), 5);
        assert_eq!(set.output_snapshots.ncols(), 5);
        assert!(set.covers(0.3, 1.5));
        assert!(!set.covers(0.2, 2.0));
    }

    #[test]
    fn zero_excitation_gives_zero_snapshots() {
        let mut model = small_model();
        let excitation = Excitation {
            powers: vec![0.0; 40],
            sample_every: 4,
        };
        let set = collect_snapshots(&mut model, &[1.0], &excitation, 4e-3).unwrap();
        assert!(set.states.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn unsorted_parameters_are_rejected() {
        let mut model = small_model();
        let excitation = Excitation::training_default(0.1, 1);
        assert!(collect_snapshots(&mut model, &[1.0, 0.5], &excitation, 4e-3).is_err());
        assert!(collect_snapshots(&mut model, &[], &excitation, 4e-3).is_err());
    }
}
