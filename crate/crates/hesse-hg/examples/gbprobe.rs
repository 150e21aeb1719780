use hesse_hg::params::HgParams;
use hesse_hg::poly::{gcd2, poly_to_string};
use hesse_hg::weyl::*;
use std::time::Instant;

fn main() {
    let p = HgParams::defaults();
    let (l1, l2) = system_operators(&p);
    let t0 = Instant::now();
    let gb = groebner(&[l1, l2], GbLimits::default()).unwrap();
    println!("GB in {:?}: {} elements", t0.elapsed(), gb.len());
    let std = standard_monomials(&gb).unwrap();
    let t0 = Instant::now();
    let pf = pfaffian(&gb, &std).unwrap();
    println!("pfaffian in {:?}", t0.elapsed());
    let r = r_polynomial().monic();
    for var in 0..2 {
        for (i, row) in pf.p[var].iter().enumerate() {
            let mut with_r = vec![];
            let mut dens = std::collections::BTreeSet::new();
            for (j, e) in row.iter().enumerate() {
                if !e.is_zero() && !e.is_polynomial() {
                    if gcd2(e.denominator(), &r) == r { with_r.push(j); }
                    dens.insert(poly_to_string(e.denominator()));
                }
            }
            println!("P{} row {} ({:?}): R in cols {:?}", var+1, i, pf.basis[i], with_r);
            if i == 8 && var == 1 {
                for d in dens { println!("   den: {}", &d[..d.len().min(120)]); }
            }
        }
    }
    let t0 = Instant::now();
    println!("integrability zero: {} ({:?})", pf.integrability_holds(), t0.elapsed());
    let sf = singular_factors(&pf);
    println!("factors: x1^{} x2^{} R^{} extra={:?}", sf.x1_mult, sf.x2_mult, sf.r_mult, sf.extra.map(|e| poly_to_string(&e)));
}
