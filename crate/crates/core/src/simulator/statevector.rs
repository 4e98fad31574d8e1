use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;

use super::{check_len, CostDiagonal, MixerSpec, QaoaParams};
use crate::config::{check_cap, Limits};
use crate::error::{invalid, Result};
use crate::graphs::{Cut, WeightedGraph};
use crate::seeding;
use crate::warmstart::BlochAngles;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return invalid(format!("{} amplitudes is not a power of two", amps.len()));
        }
        let n = amps.len().trailing_zeros() as usize;
        Ok(Statevector { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_cap("statevector", n, Limits::from_env().statevector)?;
        if index >= 1 << n {
            return invalid(format!("basis index {index} out of range for {n} qubits"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, z: Complex64) {
        self.amps.iter_mut().for_each(|a| *a *= z);
    }

    /// Little-endian `(re, im)` f64 pairs in basis order.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.amps
            .iter()
            .flat_map(|a| a.re.to_le_bytes().into_iter().chain(a.im.to_le_bytes()))
            .collect()
    }

    pub fn from_le_bytes(bytes: &[u8]) -> Result<Self> {
        if !bytes.len().is_multiple_of(16) {
            return invalid(format!("dump length {} is not a multiple of 16", bytes.len()));
        }
        let f = |b: &[u8]| f64::from_le_bytes(b.try_into().expect("8 bytes"));
        let amps = bytes
            .chunks_exact(16)
            .map(|c| Complex64::new(f(&c[..8]), f(&c[8..])))
            .collect();
        Statevector::from_amplitudes(amps)
    }
}

/// Tensor product of `cos(θ_j/2)|0⟩ + e^{iφ_j} sin(θ_j/2)|1⟩`.
pub fn prepare_separable(s: &BlochAngles) -> Result<Statevector> {
    let n = s.len();
    check_cap("statevector", n, Limits::from_env().statevector)?;
    let mut amps = Vec::with_capacity(1 << n);
    amps.push(Complex64::new(1.0, 0.0));
    for p in s.points() {
        let a0 = Complex64::new((p.theta / 2.0).cos(), 0.0);
        let a1 = Complex64::from_polar((p.theta / 2.0).sin(), p.phi);
        let half = amps.len();
        amps.extend_from_within(..);
        amps[..half].iter_mut().for_each(|a| *a *= a0);
        amps[half..].iter_mut().for_each(|a| *a *= a1);
    }
    Ok(Statevector { n, amps })
}

pub fn cost_diagonal(g: &WeightedGraph) -> Result<CostDiagonal> {
    let n = g.n();
    check_cap("statevector", n, Limits::from_env().statevector)?;
    let mut values = vec![0.0; 1 << n];
    for e in g.edges() {
        for (b, v) in values.iter_mut().enumerate() {
            if ((b >> e.u) ^ (b >> e.v)) & 1 == 1 {
                *v += e.w;
            }
        }
    }
    Ok(CostDiagonal { n, values })
}

pub fn apply_cost(sv: &mut Statevector, d: &CostDiagonal, gamma: f64) -> Result<()> {
    check_len(d.values.len(), sv.amps.len())?;
    for (a, &c) in sv.amps.iter_mut().zip(&d.values) {
        *a *= Complex64::from_polar(1.0, -gamma * c);
    }
    Ok(())
}

fn apply_one_qubit(amps: &mut [Complex64], j: usize, u: &[Complex64; 4]) {
    let stride = 1 << j;
    for block in amps.chunks_exact_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a0, a1) in lo.iter_mut().zip(hi) {
            let (x0, x1) = (*a0, *a1);
            *a0 = u[0] * x0 + u[1] * x1;
            *a1 = u[2] * x0 + u[3] * x1;
        }
    }
}

pub fn apply_mixer(sv: &mut Statevector, m: &MixerSpec, beta: f64) -> Result<()> {
    check_len(sv.n, m.len())?;
    for j in 0..sv.n {
        apply_one_qubit(&mut sv.amps, j, &m.unitary(j, beta));
    }
    Ok(())
}

/// Precomputed initial state, cost diagonal and mixer for repeated
/// evaluation of `F_p(γ, β)`.
#[derive(Debug, Clone)]
pub struct QaoaCircuit {
    initial: Statevector,
    diag: CostDiagonal,
    mixer: MixerSpec,
}

impl QaoaCircuit {
    pub fn new(g: &WeightedGraph, s: &BlochAngles, m: &MixerSpec) -> Result<Self> {
        check_len(g.n(), s.len())?;
        check_len(g.n(), m.len())?;
        Ok(QaoaCircuit {
            initial: prepare_separable(s)?,
            diag: cost_diagonal(g)?,
            mixer: m.clone(),
        })
    }

    pub fn diagonal(&self) -> &CostDiagonal {
        &self.diag
    }

    pub fn state(&self, params: &QaoaParams) -> Result<Statevector> {
        check_len(params.gamma.len(), params.beta.len())?;
        let mut sv = self.initial.clone();
        for (&gamma, &beta) in params.gamma.iter().zip(&params.beta) {
            apply_cost(&mut sv, &self.diag, gamma)?;
            apply_mixer(&mut sv, &self.mixer, beta)?;
        }
        Ok(sv)
    }

    pub fn expectation(&self, params: &QaoaParams) -> Result<f64> {
        expectation_cut(&self.state(params)?, &self.diag)
    }
}

pub fn run_qaoa(
    g: &WeightedGraph,
    s: &BlochAngles,
    m: &MixerSpec,
    params: &QaoaParams,
) -> Result<Statevector> {
    QaoaCircuit::new(g, s, m)?.state(params)
}

pub fn expectation_cut(sv: &Statevector, d: &CostDiagonal) -> Result<f64> {
    check_len(d.values.len(), sv.amps.len())?;
    Ok(sv.amps.iter().zip(&d.values).map(|(a, c)| a.norm_sqr() * c).sum())
}

pub fn cut_distribution(sv: &Statevector) -> Vec<f64> {
    sv.amps.iter().map(|a| a.norm_sqr()).collect()
}

pub fn sample_cuts(sv: &Statevector, shots: usize, seed: u64) -> Result<Vec<Cut>> {
    let dist = WeightedIndex::new(cut_distribution(sv))
        .map_err(|e| crate::Error::InvalidArgument(format!("cannot sample state: {e}")))?;
    let mut rng = seeding::rng(seed);
    Ok((0..shots)
        .map(|_| Cut::from_mask(dist.sample(&mut rng) as u64, sv.n))
        .collect())
}
