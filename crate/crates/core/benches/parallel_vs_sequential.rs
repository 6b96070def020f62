//! Compares the data-parallel map (rayon, the `parallel` default feature)
//! against a plain sequential loop on the two workloads that are actually
//! routed through it: per-level exact coefficient tables and the
//! complex-scaling eigenvalue grid. Building with
//! `--no-default-features` makes `par::map` itself sequential, so the
//! "par_map" benchmarks then measure the fallback path; the label carries
//! the active mode.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use anharm::algebra::float::{Cplx, Prec};
use anharm::numerics::banded::eigen_near;
use anharm::numerics::resonance::build_hamiltonian;
use anharm::par;
use anharm::rspt::{rspt_coeffs, CoeffTable, OscillatorSpec};

const P: Prec = Prec { digits: 40 };

fn spec(m: u32) -> OscillatorSpec {
    OscillatorSpec::new(m).unwrap()
}

/// Exact tables for several levels: the `rspt_nu_polys` fan-out shape.
fn coeff_tables(c: &mut Criterion) {
    let levels: Vec<u32> = (0..8).collect();
    let kmax = 24;
    let mut group = c.benchmark_group("coefficient_tables");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("par_map", par::mode()), &levels, |b, levels| {
        b.iter(|| -> Vec<CoeffTable> {
            par::map(levels.clone(), |n| rspt_coeffs(spec(4), n, kmax))
        })
    });
    group.bench_with_input(BenchmarkId::new("sequential", "loop"), &levels, |b, levels| {
        b.iter(|| -> Vec<CoeffTable> {
            levels.iter().map(|&n| rspt_coeffs(spec(4), n, kmax)).collect()
        })
    });
    group.finish();
}

/// Eigenvalue grid: the complex-scaling plateau-search shape.
fn eigen_grid(c: &mut Criterion) {
    let thetas = [0.15f64, 0.2, 0.25, 0.3];
    let dims = [64usize, 96];
    let g = P.real_from_f64(-0.05);
    let cells: Vec<(f64, usize)> = thetas
        .iter()
        .flat_map(|&t| dims.iter().map(move |&d| (t, d)))
        .collect();
    let solve = |(theta, dim): (f64, usize)| -> Cplx {
        let h = build_hamiltonian(spec(4), &g, theta, dim, P).unwrap();
        let seed = Cplx::new(P.real_from_f64(0.45), P.real_from_f64(-3.3e-3));
        eigen_near(&h.matrix, &seed, Some(0), P).unwrap().0
    };
    let mut group = c.benchmark_group("eigen_grid");
    group.sample_size(10);
    group.bench_with_input(BenchmarkId::new("par_map", par::mode()), &cells, |b, cells| {
        b.iter(|| -> Vec<Cplx> { par::map(cells.clone(), solve) })
    });
    group.bench_with_input(BenchmarkId::new("sequential", "loop"), &cells, |b, cells| {
        b.iter(|| -> Vec<Cplx> { cells.iter().map(|&cell| solve(cell)).collect() })
    });
    group.finish();
}

criterion_group!(benches, coeff_tables, eigen_grid);
criterion_main!(benches);
