//! Langlands parameters in exact `(lambda, y)` form for the rank-one
//! simply connected group: validation, the standard-form normalization,
//! and the final characters that index the members of a packet.
//!
//! The three parameters below walk through the classical rank-one picture:
//! a nonintegral principal series (packet of size one), the spherical
//! parameter at infinitesimal character zero (size one), and the
//! discrete-series-limit parameter (size two), the last presented first in
//! a non-normalized form that the standardization step repairs.

use num::Zero;

use realgroups::kgb::KgbContext;
use realgroups::lattice::{qr, CochVec, Q};
use realgroups::lparams::{LCtx, LParameter};
use realgroups::rootdata::{build_datum, InnerClass, InnerClassSpec, Isogeny};
use realgroups::tits::{weyl_from_word, TitsElement, WeylElt};

fn show(lctx: &LCtx, name: &str, phi: &LParameter) {
    lctx.validate(phi).expect("valid parameter");
    let standard = lctx.is_standard(phi).unwrap();
    let (std_phi, steps) = lctx.standard_form(phi).unwrap();
    let finals = lctx.final_subgroup(&std_phi).unwrap();
    println!("{}:", name);
    println!("  lambda = {:?}", phi.lambda.iter().map(|q| q.to_string()).collect::<Vec<_>>());
    println!(
        "  y: torus part {:?}, word {:?}",
        phi.y.t.entries().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        phi.y.w.word
    );
    println!("  standard form already: {}", standard);
    if !standard {
        println!(
            "  normalized in {} step(s) to torus part {:?}, word {:?}",
            steps.len(),
            std_phi.y.t.entries().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
            std_phi.y.w.word
        );
    }
    println!("  tempiric: {}", lctx.is_tempiric(&std_phi));
    println!("  final characters ({} = packet size): {:?}", finals.len(), finals);
    println!();
}

fn main() {
    let datum = build_datum("A1", Isogeny::SimplyConnected).unwrap();
    let ic = InnerClass::from_spec(datum, &InnerClassSpec::Compact).unwrap();
    let dual_ic = ic.dual();
    let kgb = KgbContext::new(&ic).unwrap();
    let lctx = LCtx::new(&kgb, &dual_ic);

    let param = |lambda: Q, t: Q, word: &[usize]| LParameter {
        lambda: vec![lambda],
        y: TitsElement {
            t: CochVec::new(vec![t]).mod1(),
            w: if word.is_empty() {
                WeylElt::identity(1)
            } else {
                weyl_from_word(&dual_ic.datum, word)
            },
            flag: true,
        },
    };

    show(&lctx, "principal series, infinitesimal character 1/2", &param(qr(1, 2), qr(1, 4), &[]));
    show(&lctx, "spherical parameter at infinitesimal character 0", &param(Q::zero(), Q::zero(), &[]));
    show(
        &lctx,
        "limit parameter, non-normalized presentation",
        &param(Q::zero(), qr(1, 2), &[]),
    );
    show(&lctx, "limit parameter, normalized", &param(Q::zero(), qr(1, 2), &[0]));
}
