//! Seeded randomness: named substreams of one master seed plus random
//! states, unitaries and density matrices for tests and generators.

use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c64, complete_orthonormal, CMatrix, Mat4, C64};
use crate::state::StateVector;

/// Named substreams of the master seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    Dataset,
    Step1,
    Step3,
    Shots,
    Init,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::Dataset => 1,
            Stream::Step1 => 2,
            Stream::Step3 => 3,
            Stream::Shots => 4,
            Stream::Init => 5,
        }
    }
}

/// Independent ChaCha stream for `(seed, stream)`.
pub fn substream(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream.id());
    rng
}

/// Further split of a substream, e.g. one per candidate pair.
pub fn child_stream(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    rng.set_stream(stream.id());
    rng
}

pub fn gaussian_c64<R: RngCore + ?Sized>(rng: &mut R) -> C64 {
    c64(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_state<R: RngCore + ?Sized>(num_qubits: usize, rng: &mut R) -> StateVector {
    let amps: Vec<C64> = (0..1usize << num_qubits).map(|_| gaussian_c64(rng)).collect();
    StateVector::from_amplitudes_normalized(amps).expect("gaussian vector is non-zero")
}

/// Haar-random `n × n` unitary via Gram-Schmidt on a Gaussian matrix.
pub fn random_unitary<R: RngCore + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian_c64(rng)).collect();
        for _ in 0..2 {
            for b in &cols {
                let p: C64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= p * y;
                }
            }
        }
        let nrm = crate::math::sqrt(v.iter().map(|x| x.norm_sqr()).sum());
        if nrm > 1e-8 {
            cols.push(v.into_iter().map(|x| x / nrm).collect());
        }
    }
    let cols = complete_orthonormal(&cols, n);
    CMatrix::from_fn(n, n, |r, c| cols[c][r])
}

pub fn random_unitary4<R: RngCore + ?Sized>(rng: &mut R) -> Mat4 {
    random_unitary(4, rng).to_mat4()
}

/// Random single-qubit density matrix: Bloch vector uniform in the ball.
pub fn random_rdm1<R: RngCore + ?Sized>(rng: &mut R) -> crate::state::Rdm1 {
    loop {
        let v: [f64; 3] = core::array::from_fn(|_| 2.0 * rng.random::<f64>() - 1.0);
        let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        if r2 <= 1.0 {
            return crate::state::Rdm1::from_bloch_projected(v[0], v[1], v[2]);
        }
    }
}
