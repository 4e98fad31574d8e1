use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{check_len, prepare_separable, CostDiagonal, MixerSpec, QaoaParams};
use crate::config::{check_cap, Limits, TOL};
use crate::error::{invalid, Result};
use crate::graphs::WeightedGraph;
use crate::simulator::{cost_diagonal, Statevector};
use crate::warmstart::BlochAngles;

/// Row-major `2^n × 2^n` density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_pure(sv: &Statevector) -> Result<Self> {
        check_cap("density matrix", sv.n(), Limits::from_env().density)?;
        let a = sv.amplitudes();
        let data = a
            .iter()
            .flat_map(|r| a.iter().map(move |c| r * c.conj()))
            .collect();
        Ok(DensityMatrix { n: sv.n(), data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Largest `|ρ - ρ†|` entry.
    pub fn hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let dim = self.dim();
        let m = DMatrix::from_row_slice(dim, dim, &self.data);
        m.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Checks unit trace, Hermiticity and positive semidefiniteness.
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TOL.norm || tr.im.abs() > TOL.norm {
            return invalid(format!("density matrix trace {tr}"));
        }
        let h = self.hermiticity_error();
        if h > TOL.norm {
            return Err(crate::Error::NonHermitian(h));
        }
        let lo = self.min_eigenvalue();
        if lo < TOL.psd {
            return invalid(format!("density matrix has eigenvalue {lo}"));
        }
        Ok(())
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.get(i, i).re).collect()
    }

    pub fn expectation(&self, d: &CostDiagonal) -> Result<f64> {
        check_len(self.dim(), d.values().len())?;
        Ok(self.populations().iter().zip(d.values()).map(|(p, c)| p * c).sum())
    }

    fn apply_cost(&mut self, d: &CostDiagonal, gamma: f64) {
        let dim = self.dim();
        let phases: Vec<Complex64> =
            d.values().iter().map(|&c| Complex64::from_polar(1.0, -gamma * c)).collect();
        for (r, row) in self.data.chunks_exact_mut(dim).enumerate() {
            for (x, p) in row.iter_mut().zip(&phases) {
                *x *= phases[r] * p.conj();
            }
        }
    }

    /// `ρ ← U ρ U†` with `U` acting on qubit `j`.
    fn apply_unitary(&mut self, j: usize, u: &[Complex64; 4]) {
        let dim = self.dim();
        let bit = 1 << j;
        for r0 in (0..dim).filter(|r| r & bit == 0) {
            let r1 = r0 | bit;
            for c in 0..dim {
                let (x0, x1) = (self.data[r0 * dim + c], self.data[r1 * dim + c]);
                self.data[r0 * dim + c] = u[0] * x0 + u[1] * x1;
                self.data[r1 * dim + c] = u[2] * x0 + u[3] * x1;
            }
        }
        let v = u.map(|z| z.conj());
        for row in self.data.chunks_exact_mut(dim) {
            for c0 in (0..dim).filter(|c| c & bit == 0) {
                let c1 = c0 | bit;
                let (x0, x1) = (row[c0], row[c1]);
                row[c0] = x0 * v[0] + x1 * v[1];
                row[c1] = x0 * v[2] + x1 * v[3];
            }
        }
    }

    fn dephase(&mut self, j: usize, keep: f64) {
        let dim = self.dim();
        for (r, row) in self.data.chunks_exact_mut(dim).enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                if (r ^ c) >> j & 1 == 1 {
                    *x *= keep;
                }
            }
        }
    }
}

/// Kraus set `{√(1-q) I, √q |0⟩⟨0|, √q |1⟩⟨1|}` on `qubit`: coherences
/// between the two values of that qubit shrink by `1 - q`.
pub fn phase_damping_channel(rho: &DensityMatrix, qubit: usize, q: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return invalid(format!("damping probability {q} outside [0, 1]"));
    }
    if qubit >= rho.n {
        return invalid(format!("qubit {qubit} out of range for {} qubits", rho.n));
    }
    let mut out = rho.clone();
    out.dephase(qubit, 1.0 - q);
    Ok(out)
}

/// Density-matrix version of the circuit with phase damping after every
/// single-qubit mixer rotation. Returns the final state and `Tr(ρ H_C)`.
pub fn run_qaoa_noisy(
    g: &WeightedGraph,
    s: &BlochAngles,
    m: &MixerSpec,
    params: &QaoaParams,
    q: f64,
) -> Result<(DensityMatrix, f64)> {
    check_len(g.n(), s.len())?;
    check_len(g.n(), m.len())?;
    check_len(params.gamma.len(), params.beta.len())?;
    check_cap("density matrix", g.n(), Limits::from_env().density)?;
    if !(0.0..=1.0).contains(&q) {
        return invalid(format!("damping probability {q} outside [0, 1]"));
    }
    let d = cost_diagonal(g)?;
    let mut rho = DensityMatrix::from_pure(&prepare_separable(s)?)?;
    for (&gamma, &beta) in params.gamma.iter().zip(&params.beta) {
        rho.apply_cost(&d, gamma);
        for j in 0..g.n() {
            rho.apply_unitary(j, &m.unitary(j, beta));
            rho.dephase(j, 1.0 - q);
        }
    }
    let e = rho.expectation(&d)?;
    Ok((rho, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{generate_erdos_renyi, WeightLaw};
    use crate::seeding;
    use crate::simulator::{mixer_from_state, QaoaCircuit};
    use crate::warmstart::BlochPoint;
    use rand::Rng;
    use std::f64::consts::{PI, TAU};

    fn random_state(n: usize, seed: u64) -> BlochAngles {
        let mut rng = seeding::rng(seed);
        BlochAngles(
            (0..n)
                .map(|_| BlochPoint::new(rng.random_range(0.1..PI - 0.1), rng.random_range(0.0..TAU)))
                .collect(),
        )
    }

    fn to_matrix(rho: &DensityMatrix) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(rho.dim(), rho.dim(), &rho.data)
    }

    /// `Σ_k M_k ρ M_k†` with each single-qubit `M_k` lifted to the full space.
    fn kraus_oracle(rho: &DensityMatrix, qubit: usize, ops: &[[f64; 4]]) -> DMatrix<Complex64> {
        let dim = rho.dim();
        let r = to_matrix(rho);
        let mut out = DMatrix::zeros(dim, dim);
        for op in ops {
            let lifted = DMatrix::from_fn(dim, dim, |i, j| {
                if (i ^ j) & !(1 << qubit) != 0 {
                    return Complex64::new(0.0, 0.0);
                }
                Complex64::new(op[2 * (i >> qubit & 1) + (j >> qubit & 1)], 0.0)
            });
            out += &lifted * &r * lifted.adjoint();
        }
        out
    }

    #[test]
    fn damping_matches_kraus_sum() {
        let sv = prepare_separable(&random_state(3, 2)).unwrap();
        let rho = DensityMatrix::from_pure(&sv).unwrap();
        for q in [0.0f64, 0.03, 0.4, 1.0] {
            let (a, b) = ((1.0 - q).sqrt(), q.sqrt());
            let ops = [[a, 0.0, 0.0, a], [b, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, b]];
            for qubit in 0..3 {
                let ours = to_matrix(&phase_damping_channel(&rho, qubit, q).unwrap());
                let oracle = kraus_oracle(&rho, qubit, &ops);
                assert!((ours - oracle).camax() < 1e-14);
            }
        }
    }

    #[test]
    fn damping_examples() {
        let sv = prepare_separable(&BlochAngles(vec![BlochPoint::new(1.1, 0.4)])).unwrap();
        let rho = DensityMatrix::from_pure(&sv).unwrap();
        assert_eq!(phase_damping_channel(&rho, 0, 0.0).unwrap(), rho);
        let full = phase_damping_channel(&rho, 0, 1.0).unwrap();
        assert_eq!(full.get(0, 1), Complex64::new(0.0, 0.0));
        assert_eq!(full.get(0, 0), rho.get(0, 0));
        let q = 0.2;
        let part = phase_damping_channel(&rho, 0, q).unwrap();
        assert!((part.get(0, 1) - rho.get(0, 1) * (1.0 - q)).norm() < 1e-15);
        assert!(phase_damping_channel(&rho, 0, 1.5).is_err());
        assert!(phase_damping_channel(&rho, 1, 0.5).is_err());
    }

    #[test]
    fn noiseless_density_matches_statevector() {
        for seed in 0..5 {
            let g = generate_erdos_renyi(5, 0.6, WeightLaw::Uniform(0.0, 1.0), seed).unwrap();
            let s = random_state(5, seed + 10);
            let m = mixer_from_state(&s);
            let mut rng = seeding::rng(seed);
            let params = QaoaParams::new(
                (0..3).map(|_| rng.random_range(-PI..PI)).collect(),
                (0..3).map(|_| rng.random_range(-PI..PI)).collect(),
            )
            .unwrap();
            let (rho, e) = run_qaoa_noisy(&g, &s, &m, &params, 0.0).unwrap();
            let ideal = QaoaCircuit::new(&g, &s, &m).unwrap().expectation(&params).unwrap();
            assert!((e - ideal).abs() < 1e-10);
            rho.validate().unwrap();
            let (noisy, _) = run_qaoa_noisy(&g, &s, &m, &params, 0.1).unwrap();
            noisy.validate().unwrap();
        }
    }

    #[test]
    fn noise_lowers_the_expectation_on_average() {
        let (mut ideal_sum, mut noisy_sum) = (0.0, 0.0);
        for seed in 0..20 {
            let g = generate_erdos_renyi(6, 0.5, WeightLaw::Uniform(0.0, 1.0), 100 + seed).unwrap();
            let s = BlochAngles::plus_state(6);
            let m = mixer_from_state(&s);
            let circuit = QaoaCircuit::new(&g, &s, &m).unwrap();
            let steps = 24;
            let mut best = (f64::NEG_INFINITY, QaoaParams::zeros(1));
            for i in 0..steps {
                for k in 0..steps {
                    let params = QaoaParams::new(
                        vec![PI * i as f64 / steps as f64],
                        vec![PI / 2.0 * k as f64 / steps as f64],
                    )
                    .unwrap();
                    let f = circuit.expectation(&params).unwrap();
                    if f > best.0 {
                        best = (f, params);
                    }
                }
            }
            ideal_sum += best.0;
            noisy_sum += run_qaoa_noisy(&g, &s, &m, &best.1, 0.03).unwrap().1;
        }
        assert!(noisy_sum <= ideal_sum, "{noisy_sum} vs {ideal_sum}");
    }

    #[test]
    fn density_capacity() {
        let g = WeightedGraph::new(11, [(0, 1, 1.0)]).unwrap();
        let s = BlochAngles::plus_state(11);
        let r = run_qaoa_noisy(&g, &s, &mixer_from_state(&s), &QaoaParams::zeros(1), 0.0);
        assert!(matches!(r, Err(crate::Error::Capacity { .. })));
    }
}
