use quiver_weyl::scalars::Scalar;
use quiver_weyl::systems::{build_schlesinger, check_flatness, star_context, FlatnessKind};

#[test]
fn schlesinger_flatness_star_2111() {
    let t0 = std::time::Instant::now();
    let ctx = star_context(2, &[1, 1, 1], Scalar::from_int(0)).unwrap();
    let sys = build_schlesinger(&ctx).unwrap();
    let classical = check_flatness(&ctx, &sys, FlatnessKind::Classical).unwrap();
    assert!(classical.all_pass(), "{classical:?}");
    eprintln!("classical (2;1,1,1): {:?}", t0.elapsed());
    let t1 = std::time::Instant::now();
    let quantum = check_flatness(&ctx, &sys, FlatnessKind::Quantum).unwrap();
    assert!(quantum.all_pass(), "{quantum:?}");
    eprintln!("quantum (2;1,1,1): {:?}", t1.elapsed());
}
