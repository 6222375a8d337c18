//! Exact Chevalley structure constants and the signs of the adjoint action
//! of Weyl-group representatives on root vectors.
//!
//! A Chevalley basis `{X_r}` is fixed by choosing `N_{r,s} = +(p+1)` on
//! extraspecial pairs (positive roots ordered by height, then by simple-root
//! coordinates, matching the order of the root list). All other constants
//! follow from the Jacobi identity and the standard rational relations. With
//! the basis fixed, `sigma_r = exp(X_r) exp(-X_{-r}) exp(X_r)` acts on each
//! root vector by an exactly computable sign, obtained here by exponentiating
//! nilpotent adjoint matrices over the rationals.

use std::collections::HashMap;

use num::{One, Signed, Zero};

use crate::lattice::{Q, Z};
use crate::rootdata::{BasedRootDatum, InnerClass};
use crate::tits::{express_as_simple, gamma_twist, WeylElt};

/// Precomputed signs `Ad(sigma_b) X_a = eta[b][a] . X_{s_b a}` for every pair
/// of roots, together with the underlying structure constants.
pub struct ChevalleySigns {
    /// `eta[b][a]` for root indices `b`, `a`
    eta: Vec<Vec<i32>>,
}

/// `max { i >= 0 : a - i b is a root }`, for roots `a != +-b`.
fn down_string(datum: &BasedRootDatum, b: usize, a: usize) -> i64 {
    let mut p = 0i64;
    let mut cur = datum.roots[a].vec.clone();
    loop {
        let next: Vec<Z> = cur.iter().zip(&datum.roots[b].vec).map(|(x, y)| x - y).collect();
        if datum.root_index(&next).is_some() {
            p += 1;
            cur = next;
        } else {
            return p;
        }
    }
}

/// Index of the root `a + b` when it is a root.
fn sum_root(datum: &BasedRootDatum, a: usize, b: usize) -> Option<usize> {
    let v: Vec<Z> = datum.roots[a]
        .vec
        .iter()
        .zip(&datum.roots[b].vec)
        .map(|(x, y)| x + y)
        .collect();
    datum.root_index(&v)
}

/// Squared length of a root under the Weyl-invariant form
/// `B(x, y) = sum_r <x, r-check> <y, r-check>`. Only ratios are used.
fn len2(datum: &BasedRootDatum, a: usize) -> Q {
    let av = datum.roots[a].char_vec();
    let mut acc = Q::zero();
    for r in &datum.roots {
        let p = av.pair(&r.coroot_vec());
        acc += &p * &p;
    }
    acc
}

/// The full table of structure constants `[X_a, X_b] = N(a,b) X_{a+b}`
/// (zero when `a + b` is not a root; the `a = -b` case is handled by the
/// caller). Positive-pair constants come from the extraspecial normalization
/// plus the Jacobi identity; mixed and negative pairs from the standard
/// rational relations of a Chevalley basis.
fn structure_constants(datum: &BasedRootDatum) -> Vec<Vec<Q>> {
    let nroots = datum.roots.len();
    let npos = nroots / 2;
    // table for positive pairs r < s with r + s a root
    let mut pos: HashMap<(usize, usize), Q> = HashMap::new();
    let lengths: Vec<Q> = (0..nroots).map(|a| len2(datum, a)).collect();

    // resolve an arbitrary pair from the positive table built so far
    fn n_any(
        datum: &BasedRootDatum,
        pos: &HashMap<(usize, usize), Q>,
        lengths: &[Q],
        a: usize,
        b: usize,
    ) -> Q {
        let npos = datum.roots.len() / 2;
        if a == datum.negative_of(b) {
            panic!("opposite roots handled separately");
        }
        let Some(t) = sum_root(datum, a, b) else { return Q::zero() };
        if a < npos && b < npos {
            return if a < b {
                pos.get(&(a, b)).expect("positive pair computed").clone()
            } else {
                -pos.get(&(b, a)).expect("positive pair computed").clone()
            };
        }
        if a >= npos && b >= npos {
            let na = datum.negative_of(a);
            let nb = datum.negative_of(b);
            return -n_any(datum, pos, lengths, na, nb);
        }
        // mixed pair: with c = -(a+b), use N(a,b) = N(b,c) len2(a+b)/len2(a)
        let c = datum.negative_of(t);
        let nbc = n_any(datum, pos, lengths, b, c);
        nbc * &lengths[t] / &lengths[a]
    }

    // positive roots are listed first, in increasing height, so processing
    // sums `t` in index order keeps every needed lower constant available
    for t in 0..npos {
        let mut specials: Vec<(usize, usize)> = Vec::new();
        for r in 0..npos {
            for s in (r + 1)..npos {
                if sum_root(datum, r, s) == Some(t) {
                    specials.push((r, s));
                }
            }
        }
        if specials.is_empty() {
            continue;
        }
        let (r1, s1) = specials[0]; // minimal r: extraspecial pair
        let p = down_string(datum, r1, s1);
        pos.insert((r1, s1), Q::from_integer(Z::from(p + 1)));
        for &(r, s) in &specials[1..] {
            // Jacobi identity on (-r1, r, s):
            //   N(r,s) N(-r1,t) + N(s,-r1) N(r,s-r1) + N(-r1,r) N(s,r-r1) = 0
            let nr1 = datum.negative_of(r1);
            let denom = n_any(datum, &pos, &lengths, nr1, t);
            assert!(!denom.is_zero(), "extraspecial difference must be a root");
            let mut acc = Q::zero();
            let n_s_nr1 = n_any(datum, &pos, &lengths, s, nr1);
            if !n_s_nr1.is_zero() {
                let sr1 = sum_root(datum, s, nr1).unwrap();
                acc += n_s_nr1 * n_any(datum, &pos, &lengths, r, sr1);
            }
            let n_nr1_r = n_any(datum, &pos, &lengths, nr1, r);
            if !n_nr1_r.is_zero() {
                let rr1 = sum_root(datum, nr1, r).unwrap();
                acc += n_nr1_r * n_any(datum, &pos, &lengths, s, rr1);
            }
            let value = -acc / denom;
            // Chevalley property: |N(r,s)| = (down-string length) + 1
            let expect = down_string(datum, r, s) + 1;
            assert_eq!(
                value.abs(),
                Q::from_integer(Z::from(expect)),
                "structure constant magnitude"
            );
            pos.insert((r, s), value);
        }
    }

    let mut full = vec![vec![Q::zero(); nroots]; nroots];
    for a in 0..nroots {
        for b in 0..nroots {
            if a == datum.negative_of(b) || sum_root(datum, a, b).is_none() {
                continue;
            }
            full[a][b] = n_any(datum, &pos, &lengths, a, b);
        }
    }
    full
}

// -- small dense rational matrices for the adjoint representation ----------

type Mat = Vec<Vec<Q>>;

fn mat_zero(n: usize) -> Mat {
    vec![vec![Q::zero(); n]; n]
}

fn mat_identity(n: usize) -> Mat {
    let mut m = mat_zero(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = mat_zero(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[k][j].is_zero() {
                    continue;
                }
                out[i][j] += &a[i][k] * &b[k][j];
            }
        }
    }
    out
}

fn mat_exp_nilpotent(m: &Mat) -> Mat {
    let n = m.len();
    let mut out = mat_identity(n);
    let mut term = mat_identity(n);
    for k in 1..=(n + 1) {
        term = mat_mul(&term, m);
        if term.iter().all(|row| row.iter().all(|v| v.is_zero())) {
            break;
        }
        let inv = Q::one() / Q::from_integer(Z::from(factorial(k)));
        for i in 0..n {
            for j in 0..n {
                if !term[i][j].is_zero() {
                    out[i][j] += &term[i][j] * &inv;
                }
            }
        }
        assert!(k <= n, "adjoint matrix is not nilpotent");
    }
    out
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}

/// Adjoint matrix of `sign * X_b` on the basis `X_0, ..., X_{R-1}, H_1, ...,
/// H_rank`.
fn ad_matrix(datum: &BasedRootDatum, n: &[Vec<Q>], b: usize, sign: i32) -> Mat {
    let nroots = datum.roots.len();
    let rank = datum.rank;
    let dim = nroots + rank;
    let mut m = mat_zero(dim);
    let s = Q::from_integer(Z::from(sign));
    for a in 0..nroots {
        if a == datum.negative_of(b) {
            // [X_b, X_{-b}] = H_{b-check}
            for k in 0..rank {
                m[nroots + k][a] = &s * Q::from_integer(datum.roots[b].coroot[k].clone());
            }
        } else if let Some(t) = sum_root(datum, b, a) {
            m[t][a] = &s * &n[b][a];
        }
    }
    for k in 0..rank {
        // [X_b, H_k] = -<b, e_k> X_b
        m[b][nroots + k] = -&s * Q::from_integer(datum.roots[b].vec[k].clone());
    }
    m
}

impl ChevalleySigns {
    pub fn new(datum: &BasedRootDatum) -> Self {
        let n = structure_constants(datum);
        let nroots = datum.roots.len();
        let mut eta = vec![vec![0i32; nroots]; nroots];
        for b in 0..nroots {
            let e1 = mat_exp_nilpotent(&ad_matrix(datum, &n, b, 1));
            let e2 = mat_exp_nilpotent(&ad_matrix(datum, &n, datum.negative_of(b), -1));
            let sigma = mat_mul(&mat_mul(&e1, &e2), &e1);
            for a in 0..nroots {
                // s_b(a) = a - <a, b-check> b
                let pairing = datum.roots[a].char_vec().pair(&datum.roots[b].coroot_vec());
                let img: Vec<Z> = datum.roots[a]
                    .vec
                    .iter()
                    .zip(&datum.roots[b].vec)
                    .map(|(av, bv)| av - pairing.to_integer() * bv)
                    .collect();
                let img_idx = datum.root_index(&img).expect("reflection permutes roots");
                let v = &sigma[img_idx][a];
                assert!(
                    (v == &Q::one()) || (v == &(-Q::one())),
                    "sigma must act on root vectors by +-1"
                );
                for (row, srow) in sigma.iter().enumerate() {
                    if row != img_idx {
                        assert!(srow[a].is_zero(), "sigma must permute root lines");
                    }
                }
                eta[b][a] = if v == &Q::one() { 1 } else { -1 };
            }
        }
        ChevalleySigns { eta }
    }

    /// Sign of `Ad(sigma_b)` on `X_a` (root indices).
    pub fn sigma_sign(&self, b: usize, a: usize) -> i32 {
        self.eta[b][a]
    }

    /// Sign of `Ad(sigma_w)` on `X_a` for a reduced word.
    pub fn word_sign(&self, datum: &BasedRootDatum, w: &WeylElt, a: usize) -> i32 {
        let mut sign = 1;
        let mut cur = a;
        for &i in w.word.iter().rev() {
            let beta = datum.simple_index(i);
            sign *= self.eta[beta][cur];
            let s = datum.simple_reflection_cochar(i);
            cur = datum.act_on_root(&s, cur).expect("reflection permutes roots");
        }
        sign
    }

    /// Sign of the pinned automorphism `xi` on `X_a`, for `a` fixed by
    /// `gamma`: writing `a = w(alpha_i)`,
    /// `xi(X_a) = sign(w, alpha_i) sign(gamma(w), alpha_{pi(i)}) X_a`.
    pub fn xi_sign(&self, ic: &InnerClass, a: usize) -> i32 {
        let datum = &ic.datum;
        let (w, i) = express_as_simple(datum, a);
        let gw = gamma_twist(ic, &w);
        let a_i = datum.simple_index(i);
        let a_pi = datum.simple_index(ic.simple_perm[i]);
        self.word_sign(datum, &w, a_i) * self.word_sign(datum, &gw, a_pi)
    }
}

#[cfg(test)]
mod unit {
    use super::*;
    use crate::rootdata::{build_datum, InnerClassSpec, Isogeny};

    #[test]
    fn sl3_signs_match_matrix_model() {
        // direct 3x3 computation: Ad(sigma_1) E_23 = +E_13,
        // Ad(sigma_2) E_12 = -E_13, Ad(sigma_i) X_{alpha_i} = -X_{-alpha_i}
        let d = build_datum("A2", Isogeny::SimplyConnected).unwrap();
        let signs = ChevalleySigns::new(&d);
        let a1 = d.simple_index(0);
        let a2 = d.simple_index(1);
        // the individual mixed signs depend on which pair is normalized as
        // extraspecial, but their product is basis-independent:
        // [X1,[X2,.]] vs [X2,[X1,.]] differ by the antisymmetry of the
        // bracket, forcing opposite signs
        assert_eq!(signs.sigma_sign(a1, a2) * signs.sigma_sign(a2, a1), -1);
        assert_eq!(signs.sigma_sign(a1, a1), -1);
        assert_eq!(signs.sigma_sign(a2, a2), -1);
    }

    #[test]
    fn flip_automorphism_negates_highest_root_vector() {
        // for the diagram flip of A2, xi X_{a1+a2} = -X_{a1+a2}
        let d = build_datum("A2", Isogeny::SimplyConnected).unwrap();
        let ic = crate::rootdata::InnerClass::from_spec(d, &InnerClassSpec::Split).unwrap();
        let signs = ChevalleySigns::new(&ic.datum);
        let theta = ic
            .datum
            .root_index(&[num::BigInt::from(1), num::BigInt::from(1)])
            .or_else(|| {
                // ambient coordinates depend on the isogeny; find the
                // highest root as the sum of the simples
                let v: Vec<num::BigInt> = ic
                    .datum
                    .simple_roots
                    .row(0)
                    .iter()
                    .zip(&ic.datum.simple_roots.row(1))
                    .map(|(a, b)| a + b)
                    .collect();
                ic.datum.root_index(&v)
            })
            .unwrap();
        assert_eq!(signs.xi_sign(&ic, theta), -1);
    }

    #[test]
    fn structure_constants_satisfy_jacobi() {
        for name in ["A2", "B2", "G2"] {
            let d = build_datum(name, Isogeny::SimplyConnected).unwrap();
            let n = structure_constants(&d);
            let nroots = d.roots.len();
            // N(a,b) = -N(b,a) and integrality
            for a in 0..nroots {
                for b in 0..nroots {
                    if a == d.negative_of(b) {
                        continue;
                    }
                    assert_eq!(n[a][b], -n[b][a].clone());
                    assert!(crate::lattice::q_is_int(&n[a][b]));
                }
            }
        }
    }
}
