//! Property-based invariants, sampled with proptest over the enumerated
//! spaces of the smaller corpus groups: group-theoretic identities of the
//! cross action and Cayley transforms, the torsor structure of the fibers,
//! and idempotence of parameter standardization.

use std::sync::OnceLock;

use proptest::prelude::*;

use realgroups::chartorus;
use realgroups::kgb::{KgbContext, KgbElt};
use realgroups::lattice::Q;
use realgroups::lparams::{LCtx, LParameter};
use realgroups::rootdata::RootType;
use realgroups::sampling::{self, CorpusEntry};

/// The sampled groups: everything of rank at most two, skipping nothing —
/// the whole corpus is small enough.
fn entries() -> &'static Vec<CorpusEntry> {
    static E: OnceLock<Vec<CorpusEntry>> = OnceLock::new();
    E.get_or_init(sampling::corpus)
}

fn kgb_spaces() -> &'static Vec<(KgbContext<'static>, Vec<KgbElt>)> {
    static K: OnceLock<Vec<(KgbContext<'static>, Vec<KgbElt>)>> = OnceLock::new();
    K.get_or_init(|| {
        entries()
            .iter()
            .map(|e| {
                let kgb = KgbContext::new(&e.ic).unwrap();
                let all = kgb.enumerate();
                (kgb, all)
            })
            .collect()
    })
}

fn grids() -> &'static Vec<Vec<(LParameter, Vec<realgroups::lattice::Z>)>> {
    static G: OnceLock<Vec<Vec<(LParameter, Vec<realgroups::lattice::Z>)>>> = OnceLock::new();
    G.get_or_init(|| {
        let coeffs = sampling::default_lambda_coeffs();
        entries()
            .iter()
            .zip(kgb_spaces())
            .map(|(e, (kgb, _))| {
                let lctx = LCtx::new(kgb, &e.dual_ic);
                sampling::complete_parameter_grid(&lctx, &coeffs, 4)
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Each simple cross action is an involution on the KGB space and
    /// preserves the central square.
    #[test]
    fn cross_is_an_involution(gi in 0usize..12, xi in 0usize..25, ki in 0usize..2) {
        let (kgb, all) = &kgb_spaces()[gi % kgb_spaces().len()];
        let ss = kgb.datum().ss_rank;
        prop_assume!(ss > 0);
        let x = &all[xi % all.len()];
        let k = ki % ss;
        let y = kgb.cross(k, x);
        prop_assert!(all.contains(&y));
        prop_assert_eq!(&kgb.cross(k, &y), x);
        prop_assert_eq!(kgb.square(&y), kgb.square(x));
    }

    /// A Cayley transform up a noncompact simple root lands in the fiber of
    /// the composed involution, preserves the central square, and comes
    /// back down along the (now real) root.
    #[test]
    fn cayley_up_then_down(gi in 0usize..12, xi in 0usize..25, ki in 0usize..2) {
        let (kgb, all) = &kgb_spaces()[gi % kgb_spaces().len()];
        let ss = kgb.datum().ss_rank;
        prop_assume!(ss > 0);
        let x = &all[xi % all.len()];
        let k = ki % ss;
        let alpha = kgb.datum().simple_index(k);
        prop_assume!(kgb.root_type(x, alpha) == RootType::Imaginary);
        prop_assume!(!kgb.is_compact(x, alpha).unwrap());
        let up = kgb.cayley_up_simple(k, x).unwrap();
        prop_assert!(all.contains(&up));
        prop_assert_eq!(kgb.square(&up), kgb.square(x));
        prop_assert_eq!(kgb.root_type(&up, alpha), RootType::Real);
        let down = kgb.cayley_down(alpha, &up, all).unwrap();
        prop_assert!(down.contains(x));
    }

    /// Fiber coordinates: the character-group coordinate map is a bijection
    /// from each fiber onto the fiber group, and inverts exactly.
    #[test]
    fn fiber_coordinates_invert(gi in 0usize..12, xi in 0usize..25) {
        let (kgb, all) = &kgb_spaces()[gi % kgb_spaces().len()];
        let x = &all[xi % all.len()];
        let u = chartorus::d_tau(kgb, x);
        let back = chartorus::d_tau_inv(kgb, x.ti, &u);
        prop_assert_eq!(&back, x);
    }

    /// Standardization is idempotent, preserves validity, and fixes the
    /// infinitesimal character.
    #[test]
    fn standard_form_idempotent(gi in 0usize..12, pi in 0usize..200) {
        let e = &entries()[gi % entries().len()];
        let (kgb, _) = &kgb_spaces()[gi % kgb_spaces().len()];
        let lctx = LCtx::new(kgb, &e.dual_ic);
        let grid = &grids()[gi % grids().len()];
        prop_assume!(!grid.is_empty());
        let (phi, _) = &grid[pi % grid.len()];
        lctx.validate(phi).unwrap();
        prop_assert_eq!(lctx.is_standard(phi).unwrap(), true);
        let (again, steps) = lctx.standard_form(phi).unwrap();
        prop_assert_eq!(steps.len(), 0);
        prop_assert_eq!(&again.lambda, &phi.lambda);
        prop_assert_eq!(&again.y.w.word, &phi.y.w.word);
        let norm = |v: &[Q]| {
            let mut s: Vec<Q> = v.to_vec();
            s.sort();
            s
        };
        prop_assert_eq!(
            norm(&lctx.infinitesimal_character(&again)),
            norm(&lctx.infinitesimal_character(phi))
        );
    }

    /// The parameter-side cross action along an integral simple root keeps
    /// the parameter valid, and applying it twice returns the same
    /// parameter up to conjugating `y` by the order-two torus element of
    /// the root (so everything but the torus part returns on the nose, and
    /// the induced involution and final characters are unchanged).
    #[test]
    fn parameter_cross_involution(gi in 0usize..12, pi in 0usize..200) {
        let e = &entries()[gi % entries().len()];
        let (kgb, _) = &kgb_spaces()[gi % kgb_spaces().len()];
        let lctx = LCtx::new(kgb, &e.dual_ic);
        let grid = &grids()[gi % grids().len()];
        prop_assume!(!grid.is_empty());
        let (phi, _) = &grid[pi % grid.len()];
        let ints = lctx.integral_simples(phi);
        prop_assume!(!ints.is_empty());
        let g = ints[pi % ints.len()];
        let crossed = lctx.cross(phi, g);
        lctx.validate(&crossed).unwrap();
        let back = lctx.cross(&crossed, g);
        lctx.validate(&back).unwrap();
        prop_assert_eq!(&back.lambda, &phi.lambda);
        prop_assert_eq!(&back.y.w.word, &phi.y.w.word);
        prop_assert_eq!(lctx.theta_mat(&back), lctx.theta_mat(phi));
        prop_assert_eq!(lctx.final_subgroup(&back).unwrap(), lctx.final_subgroup(phi).unwrap());
    }
}
