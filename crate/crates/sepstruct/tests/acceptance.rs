//! One PASS/FAIL line per acceptance criterion.
//!
//! Lines listed in `UNATTAINABLE` are computed faithfully and may print
//! FAIL; any other failing line makes the target exit non-zero.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sepstruct::reproduce::{ccnr_closed_form, run_case, varrho_printed, Case, Status};
use sepstruct::state_io::save_state;
use sepstruct::sweep::run_sweep;
use sepstruct_core::approximations::{
    bppta, bsa, bsa_relative, random_robustness_pure, robustness, Robustness, SweepFamily,
};
use sepstruct_core::linalg::{
    fidelity, hermitian_eig, partial_transpose, schmidt, tensor_product,
};
use sepstruct_core::separability::{
    ccnr_crossings, ccnr_norm, finer_decomposition, indicator, min_separable_weight,
    product_basis_certificate, verdict, Certificate, Outcome,
};
use sepstruct_core::states::{
    horodecki_family, horodecki_line, max_entangled, max_mixed, q_plus, rho_m, sigma_plus, varrho,
    werner,
};
use sepstruct_core::structure::purely_decompose;
use sepstruct_core::{
    BipartiteDims, ComplexMatrix, Criterion, DensityMatrix, FamilyLine, Options, PureState, C64,
};

/// Published values the oracle shows to be off the boundary.
const UNATTAINABLE: [&str; 2] = ["4b", "4d"];

struct Line {
    id: &'static str,
    text: String,
    pass: bool,
}

#[derive(Default)]
struct Sheet {
    lines: Vec<Line>,
}

impl Sheet {
    fn record(&mut self, id: &'static str, text: impl Into<String>, pass: bool) {
        let text = text.into();
        println!("{} [{id}] {text}", if pass { "PASS" } else { "FAIL" });
        self.lines.push(Line { id, text, pass });
    }
}

fn opts() -> Options {
    Options::default()
}

fn d(a: usize, b: usize) -> BipartiteDims {
    BipartiteDims::new(a, b).unwrap()
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn ms(t: Duration) -> String {
    format!("{:.1} ms", t.as_secs_f64() * 1e3)
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_pure(rng: &mut ChaCha8Rng, dims: BipartiteDims) -> PureState {
    let v: Vec<C64> = (0..dims.total()).map(|_| random_c(rng)).collect();
    PureState::normalize(v, dims).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, dims: BipartiteDims, rank: usize) -> DensityMatrix {
    let n = dims.total();
    let g = ComplexMatrix::from_fn(n, rank, |_, _| random_c(rng));
    let m = &g * &g.adjoint();
    let tr = m.trace().re;
    DensityMatrix::new(m.scale(1.0 / tr), dims).unwrap()
}

fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| random_c(rng));
    let h = g.lin_comb(0.5, &g.adjoint(), 0.5);
    let eig = hermitian_eig(&h, 1e-14).unwrap();
    ComplexMatrix::from_fn(n, n, |i, j| eig.vectors[j][i])
}

fn criterion_1(sheet: &mut Sheet) {
    let start = Instant::now();
    let line = FamilyLine::new(max_entangled(2).density(), max_mixed(d(2, 2))).unwrap();
    let iv = min_separable_weight(&line, Criterion::Ppt, &opts()).unwrap();
    sheet.record(
        "1a",
        format!("werner PT crossing {:.10} vs 1/3 (tol 1e-6)", iv.high),
        (iv.high - 1.0 / 3.0).abs() <= 1e-6,
    );
    let third = werner(1.0 / 3.0).unwrap();
    let mut worst = 0.0f64;
    for p in [0.4, 0.5, 0.8] {
        let b = bsa(&werner(p).unwrap(), &opts()).unwrap();
        worst = worst
            .max((b.lambda_s - (3.0 * p - 1.0) / 2.0).abs())
            .max(b.bsa.map_or(f64::INFINITY, |s| s.max_abs_diff(&third)));
    }
    sheet.record(
        "1b",
        format!("werner BSA p in {{0.4,0.5,0.8}} = werner(1/3), lambda_s = (3p-1)/2; max deviation {worst:.2e} (tol 1e-6)"),
        worst <= 1e-6,
    );
    let elapsed = start.elapsed();
    sheet.record("1c", format!("werner runtime {} (limit 1 s)", ms(elapsed)), elapsed < Duration::from_secs(1));
}

fn criterion_2(sheet: &mut Sheet) {
    let mut worst = 0.0f64;
    for p in [0.1, 0.5, 0.9] {
        let s = purely_decompose(&werner(p).unwrap(), &opts());
        worst = worst
            .max((s.lambda_ps - (1.0 - p)).abs())
            .max(s.ps.map_or(f64::INFINITY, |m| m.max_abs_diff(&max_mixed(d(2, 2)))))
            .max(s.pe.map_or(f64::INFINITY, |m| m.max_abs_diff(&max_entangled(2).density())));
    }
    sheet.record(
        "2",
        format!("werner structure p in {{0.1,0.5,0.9}}: lambda = 1-p, PS = I/4, PE = psi+; max deviation {worst:.2e} (tol 1e-8)"),
        worst <= 1e-8,
    );
}

fn criterion_3(sheet: &mut Sheet) {
    let s = purely_decompose(&rho_m(), &opts());
    let r6 = 1.0 / 6f64.sqrt();
    let h = 0.5f64.sqrt();
    let phi = [c(r6), c(0.0), c(r6), c(2.0 * r6)];
    let phi_prime = [c(-h), c(0.0), c(h), c(0.0)];
    let f_pe = fidelity(&s.pe.as_ref().unwrap().eig().vectors[0], &phi);
    let f_ps = fidelity(&s.ps.as_ref().unwrap().eig().vectors[0], &phi_prime);
    let weights_ok = (s.lambda_ps - 0.25).abs() <= 1e-6;
    sheet.record(
        "3",
        format!(
            "rho_m weights {:.10}/{:.10} vs 0.75/0.25 (tol 1e-6), fidelities {f_pe:.12}, {f_ps:.12} (>= 1-1e-8)",
            1.0 - s.lambda_ps,
            s.lambda_ps
        ),
        weights_ok && f_pe >= 1.0 - 1e-8 && f_ps >= 1.0 - 1e-8,
    );
}

fn criterion_4(sheet: &mut Sheet) {
    let crossings = ccnr_crossings(&horodecki_line(3.0).unwrap(), &opts());
    let near = |target: f64| crossings.iter().any(|t| (t - target).abs() <= 1e-5);
    sheet.record(
        "4a",
        format!("horodecki alpha=3 CCNR crossing 2/7 within 1e-5; crossings {crossings:.10?}"),
        near(2.0 / 7.0),
    );
    let norm = ccnr_norm(&horodecki_family(3.0, 3.0 / 8.0).unwrap());
    sheet.record(
        "4b",
        format!("horodecki alpha=3 CCNR crossing 3/8 within 1e-5; realigned norm at 3/8 is {norm:.10}"),
        near(3.0 / 8.0),
    );

    let mut matched = true;
    let mut every_root = true;
    let mut detail = Vec::new();
    for a in [2.5, 3.0, 3.5, 4.0] {
        let found = ccnr_crossings(&horodecki_line(a).unwrap(), &opts());
        let roots = ccnr_closed_form(a);
        matched &= !found.is_empty()
            && found.iter().all(|t| roots.iter().any(|r| (t - r).abs() <= 1e-5));
        for r in roots {
            let hit = found.iter().any(|t| (t - r).abs() <= 1e-5);
            every_root &= hit;
            if !hit {
                detail.push(format!("alpha={a} root {r:.10}"));
            }
        }
    }
    sheet.record(
        "4c",
        "numeric CCNR crossings lie on the closed form for alpha in {2.5,3,3.5,4}",
        matched,
    );
    sheet.record(
        "4d",
        format!("every closed-form CCNR root is a crossing; missing: {}", detail.join(", ")),
        every_root,
    );

    let params: Vec<f64> = (0..=100).map(|k| k as f64 * 0.05).collect();
    let start = Instant::now();
    let rows = run_sweep(SweepFamily::Horodecki, &params, &[Criterion::Ppt, Criterion::Ccnr], &opts()).unwrap();
    let elapsed = start.elapsed();
    sheet.record(
        "4e",
        format!("horodecki sweep 0:5:0.05 at grid 512: {} rows in {} (limit 30 s)", rows.len(), ms(elapsed)),
        elapsed < Duration::from_secs(30),
    );
}

fn criterion_5(sheet: &mut Sheet) {
    let formula = |a: f64| (a * a - 5.0 * a + 5.0 * (a * (5.0 - a)).sqrt()) / (a * a - 5.0 * a + 25.0);
    let mut worst = 0.0f64;
    for a in [1.0, 2.0, 2.5, 3.0, 4.0, 5.0] {
        let iv = min_separable_weight(&horodecki_line(a).unwrap(), Criterion::Ppt, &opts()).unwrap();
        worst = worst.max((iv.high - formula(a)).abs());
    }
    sheet.record(
        "5a",
        format!("PPT boundary closed form for alpha in {{1,2,2.5,3,4,5}}; max deviation {worst:.2e} (tol 1e-6)"),
        worst <= 1e-6,
    );

    let rho = horodecki_family(2.5, 0.9).unwrap();
    let target = horodecki_family(2.5, 1.0 / 3.0).unwrap();
    let ccnr = ccnr_crossings(&horodecki_line(2.5).unwrap(), &opts());
    let mut dev = (formula(2.5) - 1.0 / 3.0).abs();
    dev = ccnr.iter().fold(dev, |m, t| m.max((t - 1.0 / 3.0).abs()));
    for cr in [Criterion::Ppt, Criterion::Ccnr] {
        let b = bsa_relative(&rho, cr, &opts()).unwrap();
        dev = dev.max(b.bsa.map_or(f64::INFINITY, |s| s.max_abs_diff(&target)));
    }
    let b = bppta(&rho, &opts()).unwrap();
    dev = dev.max(b.bppta.map_or(f64::INFINITY, |s| s.max_abs_diff(&target)));
    sheet.record(
        "5b",
        format!("alpha=2.5: PPT, CCNR, BSA and BPPTA boundaries all at 1/3; max deviation {dev:.2e}"),
        !ccnr.is_empty() && dev <= 1e-6,
    );

    let oracle = (-6.0 + 5.0 * 6f64.sqrt()) / 19.0;
    let b = bppta(&horodecki_family(3.0, 0.5).unwrap(), &opts()).unwrap();
    let dev = b.bppta.map_or(f64::INFINITY, |s| s.max_abs_diff(&horodecki_family(3.0, oracle).unwrap()));
    let report = run_case(Case::Horodecki, &opts());
    let flagged = report
        .checks
        .iter()
        .any(|c| c.name == "alpha=3 bppta weight" && c.status == Status::Flagged && c.expected == 3.0 / 8.0);
    sheet.record(
        "5c",
        format!("alpha=3 BPPTA at (-6+5sqrt6)/19 = {oracle:.10} (deviation {dev:.2e}); published 3/8 reported as flagged"),
        dev <= 1e-6 && flagged,
    );
}

fn criterion_6(sheet: &mut Sheet) {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let noise = max_mixed(d(2, 2));
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let psi = random_pure(&mut rng, d(2, 2));
        let expected = random_robustness_pure(&psi).unwrap();
        let form = schmidt(psi.amplitudes(), d(2, 2)).unwrap();
        let closed = form.coefficients[0] * form.coefficients.get(1).copied().unwrap_or(0.0) * 4.0;
        let r = robustness(&psi.density(), &noise, &opts()).unwrap();
        let got = r.finite().unwrap_or(f64::INFINITY);
        worst = worst.max((got - closed).abs()).max((expected - closed).abs());
    }
    sheet.record(
        "6a",
        format!("robustness(psi, I/4) = 4 r1 r2 on 50 random states; max deviation {worst:.2e} (tol 1e-5)"),
        worst <= 1e-5,
    );
    let r = robustness(&max_entangled(3).density(), &sigma_plus(), &opts()).unwrap();
    sheet.record(
        "6b",
        format!("robustness(Psi+, sigma+) = {r:?}"),
        r == Robustness::InfiniteAbove(1e6),
    );
}

fn criterion_7(sheet: &mut Sheet) {
    let mut worst = 0.0f64;
    let mut certified = true;
    for a in [0.25, 0.5, 1.0] {
        worst = worst.max(varrho(a).unwrap().matrix().max_abs_diff(&varrho_printed(a)));
        let q = q_plus(a).unwrap();
        certified &= product_basis_certificate(&q).is_some();
        let v = verdict(&q, &opts());
        certified &= v.outcome == Outcome::Separable
            && matches!(v.certificate, Certificate::ProductBasisDiagonal(_));
    }
    sheet.record(
        "7a",
        format!("varrho_a printed 9x9 matrix for a in {{0.25,0.5,1}}; max deviation {worst:.2e} (tol 1e-12)"),
        worst <= 1e-12,
    );
    sheet.record("7b", "Q+ certified separable by the product-basis certificate", certified);
}

fn criterion_8(sheet: &mut Sheet) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let shapes = [d(2, 2), d(2, 3), d(3, 2), d(3, 3)];

    let mut involution = true;
    let mut lu = 0.0f64;
    let mut concave = true;
    for k in 0..64 {
        let dims = shapes[k % shapes.len()];
        let n = dims.total();
        let m = ComplexMatrix::from_fn(n, n, |_, _| random_c(&mut rng));
        involution &= partial_transpose(&partial_transpose(&m, dims).unwrap(), dims).unwrap() == m;

        let u = tensor_product(&random_unitary(&mut rng, dims.d_a()), &random_unitary(&mut rng, dims.d_b()));
        let rho = random_state(&mut rng, dims, 1 + k % n);
        let rotated = DensityMatrix::new((&(&u * rho.matrix()) * &u.adjoint()).hermitize(), dims).unwrap();
        lu = lu.max((ccnr_norm(&rho) - ccnr_norm(&rotated)).abs());
        let psi = random_pure(&mut rng, dims);
        let moved = u.mul_vec(psi.amplitudes());
        let a = schmidt(psi.amplitudes(), dims).unwrap().coefficients;
        let b = schmidt(&moved, dims).unwrap().coefficients;
        lu = a.iter().zip(&b).fold(lu, |m, (x, y)| m.max((x - y).abs()));

        let line = FamilyLine::new(random_state(&mut rng, dims, 1), random_state(&mut rng, dims, n)).unwrap();
        let (s, t) = (rng.random_range(0.0..1.0), rng.random_range(0.0..1.0));
        for cr in [Criterion::Ppt, Criterion::Ccnr] {
            let f = indicator(&line, cr);
            concave &= f((s + t) / 2.0) >= (f(s) + f(t)) / 2.0 - 1e-9;
        }
    }
    sheet.record("8a", "partial transpose is an involution (64 random matrices)", involution);
    sheet.record(
        "8b",
        format!("CCNR norm and Schmidt coefficients invariant under local unitaries; max deviation {lu:.2e} (tol 1e-9)"),
        lu <= 1e-9,
    );
    sheet.record("8c", "PPT and CCNR indicators are midpoint concave along random lines", concave);

    let mut recon = 0.0f64;
    for k in 0..32 {
        let dims = if k % 2 == 0 { d(2, 2) } else { d(2, 3) };
        let rho = random_state(&mut rng, dims, 1 + k % dims.total());
        let s = purely_decompose(&rho, &opts());
        recon = recon.max(s.reconstruct().max_abs_diff(rho.matrix()));
    }
    sheet.record(
        "8d",
        format!("structure reconstruction on 32 random states; max deviation {recon:.2e} (tol 1e-8)"),
        recon <= 1e-8,
    );

    let dir = tempfile::TempDir::new().unwrap();
    let input = dir.path().join("state.json");
    save_state(&input, &random_state(&mut rng, d(2, 3), 3)).unwrap();
    let outputs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            Command::new(env!("CARGO_BIN_EXE_sepstruct"))
                .args(["decompose", input.to_str().unwrap(), "--json"])
                .output()
                .unwrap()
                .stdout
        })
        .collect();
    sheet.record(
        "8e",
        "decompose output is byte-identical across runs",
        !outputs[0].is_empty() && outputs[0] == outputs[1],
    );

    let mut finer = true;
    for k in 0..100 {
        let dims = if k % 2 == 0 { d(2, 2) } else { d(2, 3) };
        let sigma2 = random_state(&mut rng, dims, 1 + k % dims.total());
        let omega = random_state(&mut rng, dims, dims.total());
        let eps = rng.random_range(0.05..0.95);
        let sigma1 = sigma2.mix(1.0 - eps, &omega).unwrap();
        let Ok(cert) = finer_decomposition(&sigma1, &sigma2, &opts()) else {
            finer = false;
            continue;
        };
        let Some(om) = cert.omega else {
            finer = false;
            continue;
        };
        let rebuilt = sigma2.matrix().lin_comb(1.0 - cert.epsilon, om.matrix(), cert.epsilon);
        finer &= cert.epsilon <= eps + 1e-9 && rebuilt.max_abs_diff(sigma1.matrix()) < 1e-8;
    }
    sheet.record("8f", "finer_decomposition on 100 nested pairs", finer);

    let elapsed = start.elapsed();
    sheet.record(
        "8g",
        format!("property checks finished in {} (limit 2 min)", ms(elapsed)),
        elapsed < Duration::from_secs(120),
    );
}

fn main() {
    let start = Instant::now();
    let mut sheet = Sheet::default();
    criterion_1(&mut sheet);
    criterion_2(&mut sheet);
    criterion_3(&mut sheet);
    criterion_4(&mut sheet);
    criterion_5(&mut sheet);
    criterion_6(&mut sheet);
    criterion_7(&mut sheet);
    criterion_8(&mut sheet);

    let failed: Vec<&Line> = sheet.lines.iter().filter(|l| !l.pass).collect();
    let unexpected: Vec<&&Line> = failed.iter().filter(|l| !UNATTAINABLE.contains(&l.id)).collect();
    println!(
        "{} criteria lines, {} passed, {} failed ({} known unattainable), {}",
        sheet.lines.len(),
        sheet.lines.len() - failed.len(),
        failed.len(),
        failed.len() - unexpected.len(),
        ms(start.elapsed())
    );
    if !unexpected.is_empty() {
        for l in unexpected {
            eprintln!("unexpected failure [{}] {}", l.id, l.text);
        }
        std::process::exit(1);
    }
}
