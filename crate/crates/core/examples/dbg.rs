use qscft::domain::*;
use qscft::propagator::*;
use std::sync::Arc;
fn stats(name: &str, p: &Propagator) {
    let mut min = f64::MAX; let mut max = f64::MIN;
    for v in p.kernel().iter() { min = min.min(*v); max = max.max(*v); }
    println!("{name}: min {min:.3e} max {max:.3e} rel {:.3e}", min/max);
}
fn main() {
    let u = UnitSystem::default();
    // production-ish harmonic grid
    let g = Arc::new(Grid::cartesian_1d(20.0, 256, BoundaryCondition::Periodic).unwrap());
    let w = ScalarField::from_fn(&g, |p| 0.5*p[0]*p[0]);
    stats("harmonic n256 b1", &build_propagator(&w, &ContourSchedule::default_for(1.0).unwrap(), &u).unwrap());
    // hydrogen radial
    let g = Arc::new(Grid::radial_3d(20.0, 512).unwrap());
    let w = ScalarField::from_fn(&g, |p| -1.0/p[0]);
    stats("hydrogen n512 b1", &build_propagator(&w, &ContourSchedule::default_for(1.0).unwrap(), &u).unwrap());
    // box
    let g = Arc::new(Grid::cartesian_1d(1.0, 64, BoundaryCondition::DirichletZero).unwrap());
    let w = ScalarField::zeros(&g);
    stats("box n64 b1", &build_propagator(&w, &ContourSchedule::default_for(1.0).unwrap(), &u).unwrap());
    // finite well
    let g = Arc::new(Grid::cartesian_1d(30.0, 384, BoundaryCondition::DirichletZero).unwrap());
    let w = ScalarField::from_fn(&g, |p| if p[0].abs() <= 1.0 { -1.0 } else { 0.0 });
    stats("well n384 b1", &build_propagator(&w, &ContourSchedule::default_for(1.0).unwrap(), &u).unwrap());
    // coarse grid (known ringing)
    let g = Arc::new(Grid::cartesian_1d(20.0, 128, BoundaryCondition::Periodic).unwrap());
    let w = ScalarField::from_fn(&g, |p| 0.3 * p[0].cos() + 0.5);
    stats("coarse n128 b0.7", &build_propagator(&w, &ContourSchedule::default_for(0.7).unwrap(), &u).unwrap());
}
