use geotri_core::format::RunConfig;
use geotri_core::mesh::golden;
use geotri_pipeline::triangulate_surface;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "square".into());
    let eps: f64 = std::env::args().nth(2).map_or(0.3, |s| s.parse().unwrap());
    let m = match which.as_str() {
        "cube" => golden::cube(),
        "torus" => golden::flat_torus(),
        "half" => golden::half_square(),
        "pillow" => golden::pillow(),
        "saddle" => golden::saddle(),
        "grid" => golden::grid_square(10, 10.0),
        _ => golden::flat_square(),
    };
    let t = std::time::Instant::now();
    match triangulate_surface(&m, &RunConfig::new(eps)) {
        Ok(r) => {
            println!("{} triangles, k={}, area {} / {}, {:.2?}", r.triangles.len(), r.subdivision, r.total_area(), m.area(), t.elapsed());
            for s in &r.stages {
                println!("  {} {} {:.3}s", s.stage, s.regions, s.seconds);
            }
            let uncert = r.triangles.iter().filter(|t| t.cert.is_none()).count();
            let degen = r.triangles.iter().filter(|t| t.degenerate).count();
            let transit = r.triangles.iter().filter(|t| !t.transit_ok).count();
            println!("  transit failures {transit}");
            let maxd = r.triangles.iter().map(|t| t.diameter).fold(0.0, f64::max);
            println!("  uncertified {uncert} degenerate {degen} max diameter {maxd}");
        }
        Err(e) => println!("error {e} after {:.2?}", t.elapsed()),
    }
}
