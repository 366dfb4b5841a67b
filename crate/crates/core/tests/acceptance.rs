//! Acceptance suite. Runs every criterion at its stated tolerance, prints one
//! line per criterion and exits nonzero if any fails.

use std::f64::consts::{PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use triad_core::experiment::{
    default_delay_grid, default_phase_grid, delay_preparations, dip_visibility, scan_delays,
    scan_triad, simulate_counts, theta_for_phase, DetectionCascade, ExperimentSetup, Recipe,
    EVENT_COLUMNS,
};
use triad_core::interference::{
    balanced_beamsplitter, balanced_tritter, beamsplitter_p11, event_probability,
    output_distribution, tritter_bunched, tritter_p111, two_photon_marginals_tritter, EventSpec,
};
use triad_core::mixedstate::{build_densities, p111_mixed, PurityModel};
use triad_core::modes::{
    angle_distance, delay_invariance_test, gram_matrix, qubit_triad_phase, triad_phase,
    GramMatrix, InternalState, PolarizationState, SampledSpectrum,
};
use triad_core::oracle::{oracle_equivalence, random_state};
use triad_core::source::{enumerate_terms, truncation_deficit, SourceParams};
use triad_core::{CMatrix, Network, C64};

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: triad_core::Error) -> String {
    e.to_string()
}

fn criterion_1() -> Outcome {
    let r = oracle_equivalence(500, 4, 0xACCE).map_err(err)?;
    check(
        r.max_deviation < 1e-9,
        format!("{} instances, {} events, max deviation {:.2e}", r.instances, r.events, r.max_deviation),
    )
}

fn random_gram(rng: &mut ChaCha8Rng) -> GramMatrix {
    let states: Vec<InternalState> = (0..3).map(|_| random_state(rng)).collect();
    gram_matrix(&states).expect("valid states")
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = balanced_tritter();
    let (mut dev, mut norm_dev) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let g = random_gram(&mut rng);
        let (r12, r23, r31) = g.moduli();
        let phi = triad_phase(&g).map_err(err)?;
        let dist = output_distribution(&t, &[0, 1, 2], &g).map_err(err)?;
        let p = |o: [usize; 3]| dist.iter().find(|x| x.0 .0 == o).map(|x| x.1).unwrap();
        let b = tritter_bunched(r12, r23, r31, phi).map_err(err)?;
        let m = two_photon_marginals_tritter(&g).map_err(err)?;
        let pairs = [
            (tritter_p111(r12, r23, r31, phi).map_err(err)?, p([1, 1, 1])),
            (b.p300, p([3, 0, 0])),
            (b.p300, p([0, 3, 0])),
            (b.p300, p([0, 0, 3])),
            (b.p120, p([1, 2, 0])),
            (b.p120, p([0, 1, 2])),
            (b.p120, p([2, 0, 1])),
            (b.p021, p([0, 2, 1])),
            (b.p021, p([2, 1, 0])),
            (b.p021, p([1, 0, 2])),
            (m.p011, (2.0 - r23 * r23) / 9.0),
            (m.p101, (2.0 - r31 * r31) / 9.0),
            (m.p110, (2.0 - r12 * r12) / 9.0),
        ];
        for (a, b) in pairs {
            dev = dev.max((a - b).abs());
        }
        norm_dev = norm_dev.max((dist.iter().map(|x| x.1).sum::<f64>() - 1.0).abs());
    }
    check(
        dev < 1e-10 && norm_dev < 1e-12 && dist_len_ok(),
        format!("1000 Gram matrices, max deviation {dev:.2e}, normalisation error {norm_dev:.2e}"),
    )
}

fn dist_len_ok() -> bool {
    EVENT_COLUMNS.len() == 13
}

fn criterion_3() -> Outcome {
    let t = balanced_tritter();
    let g = GramMatrix::all_ones(3);
    let p = |o: Vec<usize>| event_probability(&t, &EventSpec::new(vec![0, 1, 2], o).unwrap(), &g).unwrap();
    let (p120, p021, p111, p300) = (p(vec![1, 2, 0]), p(vec![0, 2, 1]), p(vec![1, 1, 1]), p(vec![3, 0, 0]));
    let b = tritter_bunched(1.0, 1.0, 1.0, 0.0).map_err(err)?;
    let f111 = tritter_p111(1.0, 1.0, 1.0, 0.0).map_err(err)?;
    let ok = p120.abs() < 1e-12
        && p021.abs() < 1e-12
        && b.p120.abs() < 1e-12
        && b.p021.abs() < 1e-12
        && (p111 - 1.0 / 3.0).abs() < 1e-12
        && (f111 - 1.0 / 3.0).abs() < 1e-12
        && (p300 - 2.0 / 9.0).abs() < 1e-12
        && (b.p300 - 2.0 / 9.0).abs() < 1e-12;
    check(ok, format!("P120 {p120:.1e}, P021 {p021:.1e}, P111 {p111:.15}, P300 {p300:.15}"))
}

fn criterion_4() -> Outcome {
    let bs = balanced_beamsplitter();
    let spec = EventSpec::new(vec![0, 1], vec![1, 1]).unwrap();
    let mut dev = 0.0f64;
    let n = 2001;
    for i in 0..n {
        let r = i as f64 / (n - 1) as f64;
        let want = (1.0 - r * r) / 2.0;
        let g = GramMatrix::new(CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(r, 0.0), C64::new(r, 0.0), C64::new(1.0, 0.0)],
        ))
        .map_err(err)?;
        dev = dev.max((event_probability(&bs, &spec, &g).map_err(err)? - want).abs());
        dev = dev.max((beamsplitter_p11(r).map_err(err)? - want).abs());
    }
    check(dev <= 1e-12, format!("{n} overlaps, max deviation {dev:.2e}"))
}

fn criterion_5() -> Outcome {
    let sigma = 1.0;
    let taus = default_delay_grid(sigma);
    let x = |tau: f64| (-tau * tau / (16.0 * sigma * sigma)).exp();
    let w = scan_delays(Recipe::AllH, &taus, sigma).map_err(err)?;
    let s = scan_delays(Recipe::StaticPi, &taus, sigma).map_err(err)?;
    let (pw, ps) = (w.series("P111").unwrap(), s.series("P111").unwrap());
    let mut dev = 0.0f64;
    for (i, &tau) in taus.iter().enumerate() {
        let x = x(tau);
        dev = dev.max((pw[i] - (2.0 + 4.0 * x.powi(6) - 2.0 * x * x - x.powi(8)) / 9.0).abs());
        dev = dev.max((ps[i] - (2.0 - x * x / 2.0 - x.powi(6) / 2.0 - x.powi(8) / 4.0) / 9.0).abs());
    }
    let centre = taus.len() / 2;
    // asymptote from a far delay
    let far = scan_delays(Recipe::AllH, &[200.0], sigma).map_err(err)?.series("P111").unwrap()[0];
    let far_pi = scan_delays(Recipe::StaticPi, &[200.0], sigma).map_err(err)?.series("P111").unwrap()[0];
    let min_w = pw.iter().cloned().fold(f64::INFINITY, f64::min);
    let monotone = ps[centre..].windows(2).all(|v| v[1] >= v[0]) && ps[..=centre].windows(2).all(|v| v[1] <= v[0]);
    let ok = dev < 1e-12
        && (pw[centre] - 1.0 / 3.0).abs() < 1e-12
        && (far - 2.0 / 9.0).abs() < 1e-12
        && min_w < 2.0 / 9.0 - 1e-3
        && (ps[centre] - 1.0 / 12.0).abs() < 1e-12
        && (far_pi - 2.0 / 9.0).abs() < 1e-12
        && monotone;
    check(
        ok,
        format!(
            "all_H P111(0) {:.12}, min {min_w:.6}, asymptote {far:.12}; static_pi P111(0) {:.12}, monotone {monotone}; max deviation {dev:.1e}",
            pw[centre], ps[centre]
        ),
    )
}

fn criterion_6() -> Outcome {
    let phis = default_phase_grid();
    let thetas: Vec<f64> = phis.iter().map(|&p| theta_for_phase(p)).collect();
    let r = scan_triad(&thetas, 1.0).map_err(err)?;
    let p = r.series("P111").unwrap();
    let mut dev = 0.0f64;
    for (phi, v) in r.x.iter().zip(p) {
        dev = dev.max((v - (1.25 + 0.5 * phi.cos()) / 9.0).abs());
    }
    let mut spread = 0.0f64;
    for name in ["P011", "P101", "P110"] {
        for v in r.series(name).unwrap() {
            spread = spread.max((v - 7.0 / 36.0).abs());
        }
    }
    let mid = phis.len() / 2;
    let ok = dev < 1e-12
        && spread < 1e-12
        && (p[0] - 7.0 / 36.0).abs() < 1e-12
        && (p[mid] - 1.0 / 12.0).abs() < 1e-12
        && (r.x[mid] - PI).abs() < 1e-12;
    check(ok, format!("{} phases, P111 deviation {dev:.1e}, marginal deviation {spread:.1e}", phis.len()))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut gauge = 0.0f64;
    for _ in 0..500 {
        let g = random_gram(&mut rng);
        let chi: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..TAU)).collect();
        let a = triad_phase(&g).map_err(err)?;
        let b = triad_phase(&g.rephased(&chi)).map_err(err)?;
        gauge = gauge.max(angle_distance(a, b));
    }
    // symmetric spectra: Gaussian at zero and nonzero centre, shifted sech^2
    let spectra = [
        SampledSpectrum::gaussian(1.0, 0.0, 4001, 12.0).map_err(err)?,
        SampledSpectrum::gaussian(0.7, 2.5, 4001, 12.0).map_err(err)?,
        SampledSpectrum::from_fn(-20.0, 24.0, 8001, |w| (1.0 / (w - 2.0).cosh()).powi(2)).map_err(err)?,
    ];
    let delays: Vec<(f64, f64, f64)> = (0..200)
        .map(|_| (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)))
        .collect();
    let mut inv = 0.0f64;
    for spec in &spectra {
        inv = inv.max(delay_invariance_test(spec, &delays).map_err(err)?.max_phase_deviation);
    }
    let mut qubit = 0usize;
    let mut qubit_fail = 0usize;
    while qubit < 500 {
        let states: Vec<PolarizationState> = (0..3)
            .map(|_| PolarizationState::from_angles(rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU)))
            .collect();
        let g = gram_matrix(
            &states
                .iter()
                .map(|&p| InternalState::gaussian(0.0, 1.0, p).unwrap())
                .collect::<Vec<_>>(),
        )
        .map_err(err)?;
        let (r12, r23, r31) = g.moduli();
        if [r12, r23, r31].iter().any(|&r| r < 1e-3 || r > 1.0 - 1e-3) {
            continue;
        }
        qubit += 1;
        let phi = triad_phase(&g).map_err(err)?;
        if !qubit_triad_phase(r12, r23, r31).map_err(err)?.admits(phi, 1e-9) {
            qubit_fail += 1;
        }
    }
    check(
        gauge < 1e-12 && inv < 1e-6 && qubit_fail == 0,
        format!(
            "gauge {gauge:.1e}, delay invariance {inv:.1e} over {} spectra x {} triples, qubit misses {qubit_fail}/{qubit}",
            spectra.len(),
            delays.len()
        ),
    )
}

fn criterion_8() -> Outcome {
    let source = SourceParams::default();
    let deficit = truncation_deficit(&enumerate_terms(&source).map_err(err)?);
    let setup = ExperimentSetup { source, cascade: DetectionCascade::config_a(0.5), ..ExperimentSetup::default() };
    let taus = default_delay_grid(1.0);
    let preps = delay_preparations(Recipe::AllH, &taus, 1.0);
    let r = simulate_counts("tau", taus.clone(), &preps, &setup).map_err(err)?;
    let v210 = dip_visibility(&r.x, r.series("P210").unwrap()).map_err(err)?;
    let v201 = dip_visibility(&r.x, r.series("P201").unwrap()).map_err(err)?;
    check(
        (0.47..=0.67).contains(&v210) && deficit < 1e-3,
        format!("N210 visibility {:.1}% (N201 {:.1}%), truncation deficit {deficit:.2e}", 100.0 * v210, 100.0 * v201),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let spec = EventSpec::new(vec![0, 1, 2], vec![1, 1, 1]).unwrap();
    let mut dev = 0.0f64;
    for _ in 0..200 {
        let net = Network::haar_random(3, &mut rng);
        let states: Vec<InternalState> = (0..3).map(|_| random_state(&mut rng)).collect();
        let rho = build_densities(&states, 1.0, PurityModel::StatePurity).map_err(err)?;
        let a = p111_mixed(&net, [&rho[0], &rho[1], &rho[2]]).map_err(err)?;
        let b = event_probability(&net, &spec, &gram_matrix(&states).map_err(err)?).map_err(err)?;
        dev = dev.max((a - b).abs());
    }
    check(dev < 1e-10, format!("200 instances, max deviation {dev:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("oracle equivalence", criterion_1),
        ("closed-form agreement", criterion_2),
        ("suppression law", criterion_3),
        ("HOM curve", criterion_4),
        ("delay scans (W shape, monotone dip)", criterion_5),
        ("triad-phase scan", criterion_6),
        ("triad-phase properties", criterion_7),
        ("noisy-model N210 visibility", criterion_8),
        ("mixed-state reduction", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} {tag} {name}: {detail} [{:.2}s]", i + 1, start.elapsed().as_secs_f64());
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
