//! Random chains of band-matrix operations, evaluated on any window.

use cmv_core::{build_cmv, BandMatrix, CmvError, Result, VerblunskySeq};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{band_operator, q, Q};

#[derive(Clone, Debug)]
pub enum Step {
    MulRight { seed: u64, lower: usize, upper: usize },
    MulLeft { seed: u64, lower: usize, upper: usize },
    Add { seed: u64, lower: usize, upper: usize },
    Sub { seed: u64, lower: usize, upper: usize },
    Commutator { seed: u64, lower: usize, upper: usize },
    MulCmv { seed: u64 },
    Dagger,
    Transpose,
    Scale(i64, i64),
}

#[derive(Clone, Debug)]
pub struct Chain {
    pub start: (u64, usize, usize),
    pub steps: Vec<Step>,
}

pub fn random_chain(seed: u64, max_len: usize) -> Chain {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let band = |rng: &mut ChaCha8Rng| (rng.gen(), rng.gen_range(0..=2), rng.gen_range(0..=2));
    let start = band(&mut rng);
    let len = rng.gen_range(1..=max_len);
    let steps = (0..len)
        .map(|_| {
            let (seed, lower, upper) = band(&mut rng);
            match rng.gen_range(0..9) {
                0 => Step::MulRight { seed, lower, upper },
                1 => Step::MulLeft { seed, lower, upper },
                2 => Step::Add { seed, lower, upper },
                3 => Step::Sub { seed, lower, upper },
                4 => Step::Commutator { seed, lower, upper },
                5 => Step::MulCmv { seed },
                6 => Step::Dagger,
                7 => Step::Transpose,
                _ => Step::Scale(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
            }
        })
        .collect();
    Chain { start, steps }
}

pub fn run_chain(chain: &Chain, window: usize) -> Result<BandMatrix<Q>> {
    let (s, l, u) = chain.start;
    let mut x = band_operator::<Q>(window, l, u, s);
    for step in &chain.steps {
        x = match *step {
            Step::MulRight { seed, lower, upper } => x.mul(&band_operator(window, lower, upper, seed))?,
            Step::MulLeft { seed, lower, upper } => band_operator(window, lower, upper, seed).mul(&x)?,
            Step::Add { seed, lower, upper } => x.add(&band_operator(window, lower, upper, seed))?,
            Step::Sub { seed, lower, upper } => x.sub(&band_operator(window, lower, upper, seed))?,
            Step::Commutator { seed, lower, upper } => x.commutator(&band_operator(window, lower, upper, seed))?,
            Step::MulCmv { seed } => {
                let alpha = VerblunskySeq::random_pythagorean(6, seed);
                build_cmv(&alpha, window)?.c.mul(&x)?
            }
            Step::Dagger => x.dagger(),
            Step::Transpose => x.transpose(),
            Step::Scale(a, b) => x.scale(&q(a, b)),
        };
    }
    Ok(x)
}

/// Outcome of comparing a chain at windows `N` and `2N`.
#[derive(Debug, PartialEq)]
pub enum Soundness {
    /// Every trusted entry at `N` matches `2N`; carries the horizon.
    Sound(usize),
    /// The chain ran out of horizon at `N`, which is a correct refusal.
    Exhausted,
    Mismatch { i: usize, j: usize },
}

pub fn check_chain(chain: &Chain, window: usize) -> Soundness {
    let small = match run_chain(chain, window) {
        Ok(m) => m,
        Err(CmvError::HorizonExhausted { .. }) => return Soundness::Exhausted,
        Err(e) => panic!("chain {chain:?} failed: {e}"),
    };
    let big = run_chain(chain, 2 * window).expect("larger window cannot exhaust first");
    let h = small.horizon();
    for i in 0..h {
        for j in 0..h {
            if small.get(i, j) != big.get(i, j) {
                return Soundness::Mismatch { i, j };
            }
        }
    }
    Soundness::Sound(h)
}
