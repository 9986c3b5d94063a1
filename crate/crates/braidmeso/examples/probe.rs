use braidmeso::ball::*;
use braidmeso::group::ExecMode;
fn main() {
    let t0 = std::time::Instant::now();
    let b = enumerate_ball_b4(4, 5_000_000, ExecMode::default()).unwrap();
    println!("B4 spheres {:?} total {} in {:?}", b.sphere_sizes, b.len(), t0.elapsed());
    let t0 = std::time::Instant::now();
    let g = enumerate_ball_g(3, 5_000_000, ExecMode::default()).unwrap();
    println!("G spheres {:?} total {} in {:?}", g.sphere_sizes, g.len(), t0.elapsed());
}
