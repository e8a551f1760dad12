//! Reference integrators that share no code path with the eigendecomposition
//! used by the library.

#![allow(dead_code)]

use qdswap_core::{Complex64, ComplexMatrix, StateVector};

/// `exp(-iHt)` by scaling and squaring a truncated Taylor series.
pub fn taylor_propagator(h: &ComplexMatrix, t: f64) -> ComplexMatrix {
    let n = h.rows();
    let a = h.scale(Complex64::new(0.0, -t));
    // Scale so the series argument has norm below 1/4.
    let norm: f64 = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0;
    while norm / f64::from(1u32 << squarings) > 0.25 {
        squarings += 1;
    }
    let scaled = a.scale_real(1.0 / f64::from(1u32 << squarings));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        sum = sum + term.clone();
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

fn derivative(h: &ComplexMatrix, psi: &[Complex64]) -> Vec<Complex64> {
    let n = psi.len();
    (0..n)
        .map(|i| -Complex64::i() * (0..n).map(|j| h[(i, j)] * psi[j]).sum::<Complex64>())
        .collect()
}

/// Integrates `i d/dt psi = H psi` with classical fourth-order Runge-Kutta.
pub fn rk4_evolve(h: &ComplexMatrix, psi0: &StateVector, t: f64, steps: usize) -> StateVector {
    let dt = t / steps as f64;
    let mut psi = psi0.amplitudes().to_vec();
    let axpy = |x: &[Complex64], y: &[Complex64], s: f64| -> Vec<Complex64> {
        x.iter().zip(y).map(|(a, b)| a + b * s).collect()
    };
    for _ in 0..steps {
        let k1 = derivative(h, &psi);
        let k2 = derivative(h, &axpy(&psi, &k1, dt / 2.0));
        let k3 = derivative(h, &axpy(&psi, &k2, dt / 2.0));
        let k4 = derivative(h, &axpy(&psi, &k3, dt));
        for i in 0..psi.len() {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (dt / 6.0);
        }
    }
    StateVector::from_amplitudes_unchecked(psi)
}

/// Random Hermitian matrix from row-major real and imaginary parts; the
/// upper triangle is mirrored and the diagonal made real.
pub fn hermitian_from_parts(dim: usize, re: &[f64], im: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, dim, |i, j| {
        let (a, b) = (i.min(j), i.max(j));
        let z = Complex64::new(re[a * dim + b], if a == b { 0.0 } else { im[a * dim + b] });
        if i <= j {
            z
        } else {
            z.conj()
        }
    })
}
