//! Critical index, class and Strichartz pair for a few `(N, p, b)`.
//!
//! `cargo run --example criticality [N p b]`
use ghartree::criteria::omega_sq;
use ghartree::eqparams::canonical_pair;
use ghartree::{classify, EquationParams};

fn main() -> ghartree::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let sets = if args.len() == 3 {
        vec![(args[0] as usize, args[1], args[2])]
    } else {
        vec![(3, 3.0, 1.0), (3, 5.0, 1.0), (4, 3.0, 2.0), (3, 7.0, 1.0), (3, 2.0, 2.0)]
    };
    println!("{:>2} {:>5} {:>5} {:>10} {:>16} {:>8} {:>10}", "N", "p", "b", "s_c", "class", "k", "omega^2");
    for (dim, p, b) in sets {
        let params = EquationParams::new(dim, p, b)?;
        let r = classify(&params)?;
        let w = if r.s_c > 0.0 { format!("{:.6}", omega_sq(&params)) } else { "-".into() };
        println!("{dim:>2} {p:>5} {b:>5} {:>10.6} {:>16} {:>8.4} {w:>10}", r.s_c, r.class.to_string(), r.k);
        if let Ok(pair) = canonical_pair(&params) {
            println!("   Strichartz pair (q, r) = ({:.4}, {:.4})", pair.q, pair.r);
        }
    }
    Ok(())
}
