//! Seeded random families of verified algebroids, forms and multivectors.
#![allow(dead_code)]

use algebroid_core::algebroid::{catalog, AlgebroidData};
use algebroid_core::calculus::{combinations, AForm, Alternating, Multivector};
use algebroid_core::symexpr::{Expr, Monomial, Poly, Rational};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse polynomial in `nvars` variables with at most `terms` terms of
/// total degree at most `deg` and small integer coefficients.
pub fn random_poly(rng: &mut TestRng, nvars: usize, deg: u32, terms: usize) -> Expr {
    let k = rng.gen_range(0..=terms);
    let mut p = Poly::zero();
    for _ in 0..k {
        let mut exps = vec![0u16; nvars];
        let d = if nvars == 0 {
            0
        } else {
            rng.gen_range(0..=deg)
        };
        for _ in 0..d {
            exps[rng.gen_range(0..nvars)] += 1;
        }
        let c: i64 = loop {
            let c = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        p = &p
            + &Poly::term(
                Rational::from_integer(c.into()),
                Monomial::from_exponents(&exps),
            );
    }
    p.into()
}

/// Unipotent upper-triangular matrix with random polynomial entries; its
/// inverse is polynomial, so frame changes keep structure functions
/// polynomial.
pub fn unipotent(rng: &mut TestRng, r: usize, nvars: usize, deg: u32) -> Vec<Vec<Expr>> {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    if i == j {
                        Expr::one()
                    } else if j > i {
                        random_poly(rng, nvars, deg, 2)
                    } else {
                        Expr::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Abelian extension `A ⊕ ℝ^k` with zero anchor on the new frame sections.
pub fn with_central(a: &AlgebroidData, k: usize) -> AlgebroidData {
    let r = a.rank();
    let n = a.dim();
    let mut anchor: Vec<Vec<Expr>> = a.anchor().to_vec();
    for _ in 0..k {
        anchor.push(vec![Expr::zero(); n]);
    }
    let rr = r + k;
    let mut c = vec![vec![vec![Expr::zero(); rr]; rr]; rr];
    for i in 0..r {
        for j in 0..r {
            for l in 0..r {
                c[i][j][l] = a.structure(i, j, l).clone();
            }
        }
    }
    AlgebroidData::from_full_table(a.chart().clone(), anchor, c)
        .unwrap()
        .verified()
        .unwrap()
}

/// Random verified algebroid with rank at most `max_rank`, produced from a
/// base family (tangent, rotation action, log-tangent, Lie algebras, central
/// extensions) by a random polynomial frame change.
pub fn random_algebroid(rng: &mut TestRng, max_rank: usize, frame_deg: u32) -> AlgebroidData {
    loop {
        let base = match rng.gen_range(0..6) {
            0 => catalog::tangent_rn(rng.gen_range(1..=3)),
            1 => catalog::so3_action(),
            2 => catalog::log_tangent_r2(),
            3 => catalog::so3(),
            4 => with_central(&catalog::tangent_rn(rng.gen_range(1..=2)), 1),
            _ => with_central(&catalog::log_tangent_r2(), 1),
        };
        if base.rank() > max_rank {
            continue;
        }
        let g = unipotent(rng, base.rank(), base.dim(), frame_deg);
        return base
            .change_frame(&g)
            .expect("unipotent matrices are invertible")
            .verified()
            .expect("frame change of a verified algebroid is verified");
    }
}

pub fn random_alternating(
    rng: &mut TestRng,
    rank: usize,
    degree: usize,
    nvars: usize,
    deg: u32,
) -> Alternating {
    let mut a = Alternating::zero(rank, degree);
    for idx in combinations(rank, degree) {
        if rng.gen_bool(0.6) {
            a.set(idx, random_poly(rng, nvars, deg, 2));
        }
    }
    a
}

pub fn random_form(rng: &mut TestRng, a: &AlgebroidData, degree: usize, deg: u32) -> AForm {
    AForm(random_alternating(rng, a.rank(), degree, a.dim(), deg))
}

pub fn random_multivector(
    rng: &mut TestRng,
    a: &AlgebroidData,
    degree: usize,
    deg: u32,
) -> Multivector {
    Multivector(random_alternating(rng, a.rank(), degree, a.dim(), deg))
}

pub fn random_covector(rng: &mut TestRng, a: &AlgebroidData, deg: u32) -> Vec<Expr> {
    (0..a.rank())
        .map(|_| random_poly(rng, a.dim(), deg, 2))
        .collect()
}
