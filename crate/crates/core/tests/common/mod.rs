#![allow(dead_code)]

use cohpol::{Complex, DensityMatrix, MixtureSpec, PureState, Slit};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-distributed pure state from four complex Gaussians.
pub fn random_pure(rng: &mut impl Rng) -> PureState {
    let mut draw = || {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex::new(re, im)
    };
    PureState::normalized([draw(), draw(), draw(), draw()]).unwrap()
}

/// Mixture of 1 to 4 random pure states with flat-Dirichlet weights.
pub fn random_mixture(rng: &mut impl Rng) -> MixtureSpec {
    let n = rng.random_range(1..=4);
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    // Put the rounding residue on the last weight so the sum is 1 to ~1 ulp.
    let head: f64 = weights[..n - 1].iter().sum();
    weights[n - 1] = (1.0 - head).max(0.0);
    MixtureSpec::new(weights.into_iter().map(|w| (w, random_pure(rng))).collect()).unwrap()
}

pub fn random_density(rng: &mut impl Rng) -> DensityMatrix {
    DensityMatrix::from_mixture(&random_mixture(rng)).unwrap()
}

/// Random state whose slit populations both exceed `floor`.
pub fn random_two_slit(rng: &mut impl Rng, floor: f64) -> DensityMatrix {
    loop {
        let rho = random_density(rng);
        if rho.slit_population(Slit::Q0) > floor && rho.slit_population(Slit::Q1) > floor {
            return rho;
        }
    }
}

pub fn max_abs_diff(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    (a.matrix() - b.matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

prop_compose! {
    pub fn arb_pure()(parts in prop::array::uniform8(-1.0f64..1.0)) -> PureState {
        let amps = [
            Complex::new(parts[0], parts[1]),
            Complex::new(parts[2], parts[3]),
            Complex::new(parts[4], parts[5]),
            Complex::new(parts[6], parts[7]),
        ];
        // The cube corners near the origin are rare; fall back to |H,0⟩.
        PureState::normalized(amps).unwrap_or_else(|_| PureState::basis(cohpol::Basis::H0))
    }
}

prop_compose! {
    pub fn arb_mixture()(
        comps in prop::collection::vec((0.0f64..1.0, arb_pure()), 1..5)
    ) -> MixtureSpec {
        let total: f64 = comps.iter().map(|(w, _)| w).sum();
        let comps: Vec<(f64, PureState)> = if total > 1e-6 {
            comps.into_iter().map(|(w, s)| (w / total, s)).collect()
        } else {
            let n = comps.len() as f64;
            comps.into_iter().map(|(_, s)| (1.0 / n, s)).collect()
        };
        MixtureSpec::new(comps).unwrap()
    }
}

pub fn arb_density() -> impl Strategy<Value = DensityMatrix> {
    arb_mixture().prop_map(|m| DensityMatrix::from_mixture(&m).unwrap())
}

pub fn arb_two_slit() -> impl Strategy<Value = DensityMatrix> {
    arb_density().prop_filter("both slits populated", |rho| {
        rho.slit_population(Slit::Q0) > 1e-6 && rho.slit_population(Slit::Q1) > 1e-6
    })
}
