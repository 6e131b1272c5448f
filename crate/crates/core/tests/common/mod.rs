//! Independent reference implementations used as test oracles. Nothing here
//! calls into the library's numeric routines.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use pmcw_core::{HermitianForm, PhaseCode};
use rand::Rng;

pub type C64 = Complex<f64>;

pub fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

/// `Σ_k conj(x_k) y_{(k+l) mod K} e^{j2πkf}` written out as a scalar loop.
pub fn r_oracle(x: &[C64], y: &[C64], l: isize, f: f64) -> C64 {
    let k_len = x.len() as isize;
    let mut re = 0.0;
    let mut im = 0.0;
    for k in 0..k_len {
        let mut idx = (k + l) % k_len;
        if idx < 0 {
            idx += k_len;
        }
        let a = x[k as usize].conj();
        let b = y[idx as usize];
        let ang = 2.0 * std::f64::consts::PI * k as f64 * f;
        let (s, c) = ang.sin_cos();
        let prod_re = a.re * b.re - a.im * b.im;
        let prod_im = a.re * b.im + a.im * b.re;
        re += prod_re * c - prod_im * s;
        im += prod_re * s + prod_im * c;
    }
    C64::new(re, im)
}

pub fn objective_oracle(x: &[C64], y: &[C64], max_shift: usize, extent: usize, spacing: f64) -> f64 {
    let mut total = 0.0;
    for l in -(max_shift as isize)..=(max_shift as isize) {
        for p in -(extent as isize)..=(extent as isize) {
            total += r_oracle(x, y, l, p as f64 * spacing).norm_sqr();
        }
    }
    total
}

pub fn random_unimodular<R: Rng>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len)
        .map(|_| cis(rng.random::<f64>() * std::f64::consts::TAU))
        .collect()
}

pub fn code(entries: &[C64]) -> PhaseCode<f64> {
    PhaseCode::from_unimodular(entries).unwrap()
}

/// All `4^len` codes over `{1, j, −1, −j}` with exact entries.
pub fn quaternary_codes(len: usize) -> Vec<Vec<C64>> {
    let alphabet = [
        C64::new(1.0, 0.0),
        C64::new(0.0, 1.0),
        C64::new(-1.0, 0.0),
        C64::new(0.0, -1.0),
    ];
    (0..4usize.pow(len as u32))
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let s = alphabet[idx % 4];
                    idx /= 4;
                    s
                })
                .collect()
        })
        .collect()
}

pub fn quad_oracle(form: &HermitianForm<f64>, z: &[C64]) -> f64 {
    let n = z.len();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += z[i].conj() * form.get(i, j) * z[j];
        }
    }
    acc.re
}

pub fn to_nalgebra(form: &HermitianForm<f64>) -> DMatrix<C64> {
    let n = form.dim();
    DMatrix::from_fn(n, n, |i, j| form.get(i, j))
}

/// Exact eigenvalues from a dense Hermitian eigensolver.
pub fn eigenvalues(form: &HermitianForm<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = SymmetricEigen::new(to_nalgebra(form))
        .eigenvalues
        .iter()
        .copied()
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `A Aᴴ` with complex Gaussian-ish `A`: Hermitian positive semidefinite.
pub fn random_psd<R: Rng>(rng: &mut R, n: usize) -> HermitianForm<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let g = &a * a.adjoint();
    let data = (0..n * n).map(|idx| g[(idx / n, idx % n)]).collect();
    HermitianForm::new(n, data).unwrap()
}

pub fn frobenius(form: &HermitianForm<f64>) -> f64 {
    form.data().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
