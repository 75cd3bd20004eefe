use std::time::Instant;

#[test]
fn probe_t4() {
    let t = Instant::now();
    let r = charkv::grt::t4_selfcheck_with(&charkv::grt::T4::rational(), 5, 100, 7);
    println!("t4 maxdeg=5 trials=100 capped: {:?} pass={}", t.elapsed(), r.pass());
}
