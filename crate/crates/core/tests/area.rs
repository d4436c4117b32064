use emcurve_core::area::{
    count_pixels, epsilon0_equilateral, epsilon_pixel, epsilon_scanline, scanline_area, PixelGridSpec,
    ScanlineOptions, EPSILON_0,
};
use emcurve_core::geometry::{Isometry, PlaneField, Point, Triangle};
use emcurve_core::tracing::Domain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn frame_equilateral() -> Triangle {
    Triangle::from_coords([0.0, 100.0 * SQRT3, -100.0, 0.0, 100.0, 0.0]).unwrap()
}

#[test]
fn pixel_method_at_frame_scale() {
    let grid = PixelGridSpec::new(Domain::square(1000.0).unwrap(), 1.0).unwrap();
    let r = epsilon_pixel(&frame_equilateral(), &grid).unwrap();
    assert!(r.closed);
    assert!((r.epsilon.unwrap() - EPSILON_0).abs() < 0.02, "{r:?}");
}

#[test]
fn pixel_method_fine_grid() {
    let grid = PixelGridSpec::new(Domain::square(3.0).unwrap(), 1e-3).unwrap();
    let r = epsilon_pixel(&Triangle::unit_equilateral(), &grid).unwrap();
    assert!((r.epsilon.unwrap() - EPSILON_0).abs() < 5e-3, "{r:?}");
}

#[test]
fn pixel_error_shrinks_with_step() {
    let t = Triangle::unit_equilateral();
    let dom = Domain::square(3.0).unwrap();
    let err = |h: f64| {
        let e = epsilon_pixel(&t, &PixelGridSpec::new(dom, h).unwrap()).unwrap().epsilon.unwrap();
        (e - EPSILON_0).abs()
    };
    let errs: Vec<f64> = [0.06, 0.03, 0.015, 0.0075].into_iter().map(err).collect();
    // The boundary pixels give an O(h) bound; cancellation usually does better.
    for (k, h) in [0.06, 0.03, 0.015, 0.0075].into_iter().enumerate() {
        assert!(errs[k] <= 2.0 * h, "step {h}: {}", errs[k]);
    }
    assert!(errs[3] < errs[0]);
}

#[test]
fn scanline_reproduces_epsilon0() {
    let r = epsilon_scanline(&Triangle::unit_equilateral(), &Domain::square(3.0).unwrap(), 1e-6).unwrap();
    assert!((r.epsilon.unwrap() - EPSILON_0).abs() < 1e-6, "{r:?}");
    let e = epsilon0_equilateral(1e-6).unwrap();
    assert!((e - EPSILON_0).abs() < 1e-6);
    let coarse = epsilon0_equilateral(1e-3).unwrap();
    assert!((coarse - e).abs() < 1e-3);
}

#[test]
fn scanline_similarity_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut done = 0;
    while done < 5 {
        let t = Triangle::from_coords(std::array::from_fn(|_| rng.random_range(-1.0..1.0))).unwrap();
        let l = t.side_lengths().longest();
        if t.area() < 0.2 * l * l {
            continue;
        }
        let dom = Domain::around(&t, 8.0);
        let Ok(base) = epsilon_scanline(&t, &dom, 1e-7) else { continue };
        let s = rng.random_range(0.1..50.0);
        let iso = Isometry::rotation(rng.random_range(0.0..6.3), Point::new(rng.random_range(-9.0..9.0), 3.0));
        let image = t.map(|p| iso.apply(p.scale(s))).unwrap();
        let moved = epsilon_scanline(&image, &Domain::around(&image, 8.0), 1e-7).unwrap();
        assert!((base.epsilon.unwrap() - moved.epsilon.unwrap()).abs() <= 1e-6);
        done += 1;
    }
}

#[test]
fn scanline_agrees_with_fine_pixels_on_an_acute_triangle() {
    let t = Triangle::from_coords([0.3, 1.9, -1.0, 0.0, 1.2, 0.1]).unwrap();
    let dom = Domain::around(&t, 6.0);
    let s = epsilon_scanline(&t, &dom, 1e-7).unwrap().epsilon.unwrap();
    let h = dom.width() / 4000.0;
    let p = epsilon_pixel(&t, &PixelGridSpec::new(dom, h).unwrap()).unwrap().epsilon.unwrap();
    assert!((s - p).abs() <= 3.0 * (1e-7 + 2.0 * h), "scanline {s} pixel {p}");
}

#[test]
fn flat_triangle_methods_agree() {
    let t = Triangle::from_coords([0.0, 1.0, -100.0, 0.0, 100.0, 0.0]).unwrap();
    let dom = Domain::square(1000.0).unwrap();
    let pixel = epsilon_pixel(&t, &PixelGridSpec::new(dom, 1.0).unwrap()).unwrap();
    match epsilon_scanline(&t, &dom, 1e-4) {
        Ok(s) => {
            assert!(pixel.closed);
            let (e_s, e_p) = (s.epsilon.unwrap(), pixel.epsilon.unwrap());
            assert!((e_s - e_p).abs() <= 0.05 * e_s, "scanline {e_s} pixel {e_p}");
        }
        Err(_) => assert!(!pixel.closed && pixel.epsilon.is_none()),
    }
}

/// The curve region with a disc removed; ridges delegate to the triangle.
struct Punctured {
    t: Triangle,
    centre: Point,
    radius: f64,
}

impl PlaneField for Punctured {
    fn value(&self, x: f64, y: f64) -> f64 {
        let d = Point::new(x, y).dist(self.centre) - self.radius;
        self.t.gap_xy(x, y).min(d)
    }

    fn column_ridges(&self, x: f64) -> Vec<f64> {
        let mut r = self.t.column_ridges(x);
        let dx = x - self.centre.x;
        if dx.abs() < self.radius {
            let h = (self.radius * self.radius - dx * dx).sqrt();
            r.extend([self.centre.y - h, self.centre.y + h]);
        }
        r
    }
}

#[test]
fn removing_an_interior_disc_removes_its_area() {
    let t = Triangle::unit_equilateral();
    let dom = Domain::square(3.0).unwrap();
    let opts = ScanlineOptions::with_tol(1e-8);
    let whole = scanline_area(&t, &dom, &opts, None).unwrap();
    let field = Punctured { t, centre: Point::new(0.0, 0.5), radius: 0.3 };
    let holed = scanline_area(&field, &dom, &opts, None).unwrap();
    let disc = std::f64::consts::PI * 0.09;
    assert!((whole.area - holed.area - disc).abs() < 1e-6, "{} vs {}", whole.area - holed.area, disc);

    let grid = PixelGridSpec::new(dom, 2e-3).unwrap();
    let removed = (count_pixels(&t, &grid) - count_pixels(&field, &grid)) as f64 * 4e-6;
    assert!((removed - disc).abs() < 5e-3);
}

#[test]
fn monte_carlo_area_matches() {
    const BATCHES: u64 = 100;
    const PER_BATCH: u64 = 1_000_000;
    let t = Triangle::unit_equilateral();
    let (x0, x1, y0, y1) = (-2.5, 2.5, -1.5, 3.5);
    let hits: u64 = (0..BATCHES)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + b);
            (0..PER_BATCH)
                .filter(|_| t.gap_xy(rng.random_range(x0..x1), rng.random_range(y0..y1)) >= 0.0)
                .count() as u64
        })
        .sum();
    let n = (BATCHES * PER_BATCH) as f64;
    let box_area = (x1 - x0) * (y1 - y0);
    let p = hits as f64 / n;
    let area = p * box_area;
    let sigma = box_area * (p * (1.0 - p) / n).sqrt();
    let expected = (1.0 + EPSILON_0) * SQRT3;
    assert!((area - expected).abs() <= 3.0 * sigma, "MC {area} ± {sigma} vs {expected}");
}
