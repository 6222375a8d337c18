//! Deterministic generation of test corpora: a fixed list of small inner
//! classes, and a documented rational grid of Langlands parameters for each.
//!
//! The parameter grid for an inner class is built as follows. For every
//! twisted involution `w` of the dual inner class, and every candidate
//! infinitesimal-character vector `lambda` whose ambient coordinates are
//! drawn from a supplied finite list, the candidate is kept when
//! `lambda - theta(lambda)` is integral (with `theta = w * gamma-dual`).
//! Torus parts `t` of `y = e(t) sigma_w xi` range over all vectors with
//! entries in `(1/d) Z mod 1` for a supplied denominator `d`, and the pair
//! is kept when it satisfies every validity condition of a Langlands
//! parameter. The result is sorted and deduplicated, so the grid is
//! byte-stable across runs.

use itertools::Itertools;
use num::Zero;

use crate::kgb::KgbContext;
use crate::lattice::{qr, CochVec, Q};
use crate::lparams::{LCtx, LParameter};
use crate::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny};
use crate::tits::twisted_involutions;

/// One inner class of the standard test corpus, with a human-readable label.
pub struct CorpusEntry {
    pub label: String,
    pub ic: InnerClass,
    pub dual_ic: InnerClass,
}

fn entry(label: &str, type_str: &str, iso: Isogeny, spec: &InnerClassSpec) -> CorpusEntry {
    let datum = build_datum(type_str, iso).expect("corpus datum");
    let ic = InnerClass::from_spec(datum, spec).expect("corpus inner class");
    let dual_ic = ic.dual();
    CorpusEntry { label: label.to_string(), ic, dual_ic }
}

/// The standard corpus: rank-one and rank-two inner classes covering both
/// isogenies, both inner classes where they differ, a product group with its
/// factor-swapping inner class, and a group with a central torus factor.
pub fn corpus() -> Vec<CorpusEntry> {
    use crate::lattice::IntMatrix;
    // the coordinate swap on the cocharacter lattice of A1.A1
    let mut swap = IntMatrix::zero(2, 2);
    *swap.at_mut(0, 1) = num::BigInt::from(1);
    *swap.at_mut(1, 0) = num::BigInt::from(1);
    vec![
        entry("A1-sc-c", "A1", Isogeny::SimplyConnected, &InnerClassSpec::Compact),
        entry("A1-ad-c", "A1", Isogeny::Adjoint, &InnerClassSpec::Compact),
        entry("A1.A1-sc-c", "A1.A1", Isogeny::SimplyConnected, &InnerClassSpec::Compact),
        entry("A1.A1-sc-swap", "A1.A1", Isogeny::SimplyConnected, &InnerClassSpec::Matrix(swap)),
        entry("A2-sc-c", "A2", Isogeny::SimplyConnected, &InnerClassSpec::Compact),
        entry("A2-sc-s", "A2", Isogeny::SimplyConnected, &InnerClassSpec::Split),
        entry("A2-ad-c", "A2", Isogeny::Adjoint, &InnerClassSpec::Compact),
        entry("A2-ad-s", "A2", Isogeny::Adjoint, &InnerClassSpec::Split),
        entry("B2-sc-c", "B2", Isogeny::SimplyConnected, &InnerClassSpec::Compact),
        entry("G2-sc-c", "G2", Isogeny::SimplyConnected, &InnerClassSpec::Compact),
        entry("A1.T1-sc-c", "A1.T1", Isogeny::SimplyConnected, &InnerClassSpec::Compact),
        entry("A1.T1-sc-s", "A1.T1", Isogeny::SimplyConnected, &InnerClassSpec::Split),
    ]
}

/// The subset of the corpus small enough for sub-second checks.
pub fn quick_corpus() -> Vec<CorpusEntry> {
    corpus()
        .into_iter()
        .filter(|e| matches!(e.label.as_str(), "A1-sc-c" | "A1-ad-c"))
        .collect()
}

/// The default coefficient list for infinitesimal-character grids.
pub fn default_lambda_coeffs() -> Vec<Q> {
    vec![Q::zero(), qr(1, 2), Q::from_integer(1.into()), qr(3, 2)]
}

/// Every valid Langlands parameter whose `lambda` has ambient coordinates in
/// `coeffs` and whose `y`-torus part has coordinates in `(1/t_denom) Z`.
/// Deterministic: sorted by `(lambda, word, torus part)` and deduplicated.
pub fn parameter_grid(lctx: &LCtx, coeffs: &[Q], t_denom: u32) -> Vec<LParameter> {
    let n = lctx.group_datum().rank;
    let twi = twisted_involutions(lctx.dual_ic);
    let t_vals: Vec<Q> = (0..t_denom).map(|k| qr(k as i64, t_denom as i64)).collect();
    let mut out: Vec<LParameter> = Vec::new();
    for w in &twi {
        let base = lctx.dual_tits.mul(&lctx.dual_tits.sigma(&w.w), &lctx.dual_tits.xi());
        let theta = w.w.mat.mul(&lctx.dual_ic.gamma);
        for lam in (0..n).map(|_| coeffs.iter().cloned()).multi_cartesian_product() {
            let diff = theta.apply_q(&lam);
            let integral = lam
                .iter()
                .zip(&diff)
                .all(|(a, b)| crate::lattice::q_is_int(&(a - b)));
            if !integral {
                continue;
            }
            for t in (0..n).map(|_| t_vals.iter().cloned()).multi_cartesian_product() {
                let y = lctx.dual_tits.mul(&lctx.dual_tits.e(CochVec::new(t)), &base);
                let p = LParameter { lambda: lam.clone(), y };
                if lctx.validate(&p).is_ok() {
                    out.push(p);
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (&a.lambda, &a.y.w.word, a.y.t.entries()).cmp(&(&b.lambda, &b.y.w.word, b.y.t.entries()))
    });
    out.dedup_by(|a, b| {
        a.lambda == b.lambda && a.y.w.word == b.y.w.word && a.y.t.entries() == b.y.t.entries()
    });
    out
}

/// The standard-form representatives of the grid, deduplicated, paired with
/// their final characters — the complete parameters a corpus check runs over.
pub fn complete_parameter_grid(
    lctx: &LCtx,
    coeffs: &[Q],
    t_denom: u32,
) -> Vec<(LParameter, Vec<crate::lattice::Z>)> {
    let mut seen: Vec<(Vec<Q>, Vec<usize>, Vec<Q>)> = Vec::new();
    let mut out = Vec::new();
    for p in parameter_grid(lctx, coeffs, t_denom) {
        let Ok((std_p, _)) = lctx.standard_form(&p) else { continue };
        let key = (
            std_p.lambda.clone(),
            std_p.y.w.word.clone(),
            std_p.y.t.entries().to_vec(),
        );
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let Ok(finals) = lctx.final_subgroup(&std_p) else { continue };
        for u in finals {
            out.push((std_p.clone(), u));
        }
    }
    out
}

/// Convenience: build the KGB context and dual inner class for a corpus
/// entry. The caller keeps ownership so the borrows in [`LCtx`] line up.
pub fn contexts<'a>(e: &'a CorpusEntry) -> Result<KgbContext<'a>, crate::kgb::KgbError> {
    KgbContext::new(&e.ic)
}
