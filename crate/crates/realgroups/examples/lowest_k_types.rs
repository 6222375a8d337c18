//! Lowest K-types by two independent routes. For every complete parameter
//! (a standard Langlands parameter together with one of its final
//! characters) the lowest-K-type computation runs twice: once by the
//! wall-crossing reduction that deforms the continuous part to zero while
//! tracking a KGB element through the crossings, and once by restricting
//! fiber characters through the accumulated trail. The two answers must
//! agree exactly.
//!
//! Usage: `cargo run --example lowest_k_types [LABEL]` with a corpus label
//! such as `A2-sc-s` or `B2-sc-c` (default); run with no grid match to see
//! the available labels.

use realgroups::kgb::KgbContext;
use realgroups::lkt;
use realgroups::lparams::LCtx;
use realgroups::sampling;

fn main() {
    let want = std::env::args().nth(1).unwrap_or_else(|| "B2-sc-c".to_string());
    let corpus = sampling::corpus();
    let Some(entry) = corpus.iter().find(|e| e.label == want) else {
        eprintln!("unknown corpus label {:?}; available:", want);
        for e in &corpus {
            eprintln!("  {}", e.label);
        }
        std::process::exit(2);
    };

    let kgb = KgbContext::new(&entry.ic).unwrap();
    let lctx = LCtx::new(&kgb, &entry.dual_ic);
    let coeffs = sampling::default_lambda_coeffs();
    let grid = sampling::complete_parameter_grid(&lctx, &coeffs, 4);
    println!("{}: {} complete parameters on the standard grid", entry.label, grid.len());
    println!();

    let mut shown = 0;
    for (phi, u) in &grid {
        let r = lkt::lkt(&lctx, phi, u).expect("reduction terminates");
        assert!(r.paths_agree(), "route disagreement at {:?}", phi);
        // print a representative slice: the first few runs with a
        // nontrivial trail
        if shown < 6 && !r.trail.is_empty() {
            shown += 1;
            println!(
                "lambda = {:?}, y word {:?}, chi {:?}",
                phi.lambda.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                phi.y.w.word,
                u
            );
            println!("  trail ({} steps): {:?}", r.trail.len(), r.trail);
            println!(
                "  terminal lambda = {:?}, tempiric: {}",
                r.phi_final.lambda.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                lctx.is_tempiric(&r.phi_final)
            );
            for p in &r.entries {
                println!(
                    "  lowest K-type at KGB point: tw-inv {:?}, torus ({})",
                    kgb.tw_invs[p.x.ti].w.word,
                    p.x.t.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")
                );
            }
            println!();
        }
    }
    println!("all {} runs: both routes agree elementwise", grid.len());
}
