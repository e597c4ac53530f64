//! Acceptance suite: every criterion the artifact must meet, one test per
//! criterion, each printing a PASS line with its headline numbers.

use std::process::Command;
use std::time::{Duration, Instant};

use xpfsa::algebra::{projected_distribution, projective_composition, stream_run};
use xpfsa::counting::{cross_count, symbolic_count};
use xpfsa::dist::{sup_distance, Distribution};
use xpfsa::fixtures::{mild_generator, random_graph, random_machine, skewed_two_state};
use xpfsa::json;
use xpfsa::{
    fuse_predictions, gamma_analytic, gamma_empirical, infer_xpfsa, pfsa_distance, predict_next,
    simulate_coupled, Alphabet, CoupledSystemSpec, InferenceConfig, Pfsa, SymbolStream, Xpfsa,
};

const N: usize = 1_000_000;

fn cfg() -> InferenceConfig {
    InferenceConfig::with_epsilon(0.05)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_xpfsa"))
}

/// Exact ground-truth models of the coupled example system: a fair-coin
/// self-model for B and the two-state cross-model from B to A.
fn exact_b_self_model() -> Pfsa {
    Pfsa::new(
        Alphabet::binary(),
        vec![vec![0, 1], vec![0, 1]],
        vec![vec![0.5, 0.5], vec![0.5, 0.5]],
    )
    .unwrap()
}

fn exact_b_to_a_cross_model() -> Xpfsa {
    Xpfsa::new(
        Alphabet::binary(),
        Alphabet::binary(),
        vec![vec![0, 1], vec![0, 1]],
        vec![vec![0.8, 0.2], vec![0.2, 0.8]],
    )
    .unwrap()
}

#[test]
fn criterion_01_worked_count_examples() {
    let bin2 = Alphabet::binary();
    let tri = Alphabet::indexed(3).unwrap();
    let sa = SymbolStream::parse(bin2.clone(), "000100").unwrap();
    let sb = SymbolStream::parse(tri, "012212").unwrap();
    let x = SymbolStream::parse(bin2.clone(), "00").unwrap();

    let started = Instant::now();
    let cross = cross_count(&sa, &sb, &x, "2").unwrap();
    let plain = symbolic_count(
        &SymbolStream::parse(bin2.clone(), "0001").unwrap(),
        &SymbolStream::parse(bin2, "00").unwrap(),
    )
    .unwrap();
    let elapsed = started.elapsed();

    assert_eq!(cross, 2);
    assert_eq!(plain, 2);
    assert!(elapsed < Duration::from_millis(1), "took {elapsed:?}");
    println!("acceptance 01 worked count examples: PASS ({elapsed:?})");
}

#[test]
fn criterion_02_self_model_recovery_via_cli() {
    let truth = skewed_two_state();
    let stream = truth.sample_stream(N, 2024).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let stream_path = dir.path().join("stream.txt");
    let machine_path = dir.path().join("machine.json");
    std::fs::write(&stream_path, format!("{}\n", stream.render())).unwrap();

    let started = Instant::now();
    let status = bin()
        .arg("infer-self")
        .arg(&stream_path)
        .args(["--epsilon", "0.05"])
        .arg("-o")
        .arg(&machine_path)
        .status()
        .unwrap();
    let elapsed = started.elapsed();
    assert!(status.success());

    let inferred = json::pfsa_from_json(&std::fs::read_to_string(&machine_path).unwrap()).unwrap();
    assert_eq!(inferred.n_states(), 2, "state count");
    // match rows to the generator's by nearest sup distance
    for truth_row in truth.morph() {
        let best = (0..2)
            .map(|q| sup_distance(inferred.morph_row(q), truth_row))
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 0.02, "row {truth_row:?} off by {best}");
    }
    let d = pfsa_distance(&inferred, &truth, 6).unwrap();
    assert!(d <= 0.02, "distance {d}");
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
    println!("acceptance 02 self-model recovery: PASS (distance {d:.4}, {elapsed:?})");
}

#[test]
fn criterion_03_directional_gamma() {
    let spec = CoupledSystemSpec::skewed_binary_example();
    let (a, b) = simulate_coupled(&spec, N, 2025).unwrap();

    let started = Instant::now();
    let forward = gamma_empirical(&b, &a, &cfg()).unwrap();
    let t_forward = started.elapsed();
    let started = Instant::now();
    let reverse = gamma_empirical(&a, &b, &cfg()).unwrap();
    let t_reverse = started.elapsed();

    assert!(
        (forward.gamma - 0.2781).abs() <= 0.02,
        "gamma B->A = {}",
        forward.gamma
    );
    assert_eq!(forward.cross.machine.n_states(), 2, "B->A state count");
    assert!(reverse.gamma <= 0.02, "gamma A->B = {}", reverse.gamma);
    assert_eq!(reverse.cross.machine.n_states(), 1, "A->B state count");
    assert!(t_forward < Duration::from_secs(60), "took {t_forward:?}");
    assert!(t_reverse < Duration::from_secs(60), "took {t_reverse:?}");
    println!(
        "acceptance 03 directional gamma: PASS (B->A {:.4}, A->B {:.4})",
        forward.gamma, reverse.gamma
    );
}

#[test]
fn criterion_04_independent_sources() {
    for pair in 0..20u64 {
        let g_src = mild_generator(pair as usize);
        let g_tgt = mild_generator(pair as usize + 3);
        let a = g_src.sample_stream(N, 9000 + 2 * pair).unwrap();
        let b = g_tgt.sample_stream(N, 9001 + 2 * pair).unwrap();
        for (src, tgt, tag) in [(&a, &b, "fwd"), (&b, &a, "rev")] {
            let report = gamma_empirical(src, tgt, &cfg()).unwrap();
            assert_eq!(
                report.cross.machine.n_states(),
                1,
                "pair {pair} {tag}: states"
            );
            assert!(
                report.gamma <= 0.02,
                "pair {pair} {tag}: gamma {}",
                report.gamma
            );
        }
    }
    println!("acceptance 04 independent sources: PASS (20 pairs, both directions)");
}

#[test]
fn criterion_05_gamma_bounds_before_clamping() {
    let mut raws = Vec::new();

    // coupled example, both directions
    let spec = CoupledSystemSpec::skewed_binary_example();
    let (a, b) = simulate_coupled(&spec, N, 2026).unwrap();
    raws.push(gamma_empirical(&b, &a, &cfg()).unwrap().raw_gamma);
    raws.push(gamma_empirical(&a, &b, &cfg()).unwrap().raw_gamma);

    // independent pairs
    for pair in 0..6u64 {
        let a = mild_generator(pair as usize).sample_stream(300_000, 500 + pair).unwrap();
        let b = mild_generator(pair as usize + 2).sample_stream(300_000, 600 + pair).unwrap();
        raws.push(gamma_empirical(&a, &b, &cfg()).unwrap().raw_gamma);
        raws.push(gamma_empirical(&b, &a, &cfg()).unwrap().raw_gamma);
    }

    // fully dependent identical alternating pair
    let s = SymbolStream::parse(Alphabet::binary(), &"01".repeat(5000)).unwrap();
    raws.push(gamma_empirical(&s, &s, &cfg()).unwrap().raw_gamma);

    // analytic fixtures
    let fair = Distribution::new(vec![0.5, 0.5]).unwrap();
    raws.push(gamma_analytic(&fair, &exact_b_to_a_cross_model(), &fair).unwrap().raw);

    for (i, raw) in raws.iter().enumerate() {
        assert!(
            (-1e-6..=1.0 + 1e-6).contains(raw),
            "fixture {i}: raw gamma {raw}"
        );
    }
    println!("acceptance 05 gamma bounds: PASS ({} raw values in [-1e-6, 1+1e-6])", raws.len());
}

#[test]
fn criterion_06_algebra_identities() {
    for seed in 0..50u64 {
        let n_g = 1 + (seed as usize) % 4;
        let n_h = 1 + (seed as usize / 4) % 4;
        let k = 2 + (seed as usize) % 2;
        let g = random_machine(n_g, k, 4000 + seed);
        let h = random_graph(n_h, k, 5000 + seed);

        // projection onto the machine's own graph changes nothing
        let self_proj = projective_composition(&g, &g.graph()).unwrap();
        assert_eq!(self_proj.n_states(), g.n_states(), "seed {seed}");
        assert_eq!(self_proj.delta(), g.delta(), "seed {seed}");
        for q in 0..g.n_states() {
            assert!(
                sup_distance(self_proj.morph_row(q), g.morph_row(q)) <= 1e-9,
                "seed {seed}: self projection row {q}"
            );
        }

        // projecting twice onto the same graph is idempotent
        let once = projective_composition(&g, &h).unwrap();
        let twice = projective_composition(&once, &h).unwrap();
        assert_eq!(once.n_states(), twice.n_states(), "seed {seed}");
        assert_eq!(once.delta(), twice.delta(), "seed {seed}");
        for q in 0..once.n_states() {
            assert!(
                sup_distance(once.morph_row(q), twice.morph_row(q)) <= 1e-9,
                "seed {seed}: idempotence row {q}"
            );
        }

        // the projected distribution is invariant under projection
        let direct = projected_distribution(&g, &h).unwrap();
        let via_projection = projected_distribution(&once, &h).unwrap();
        assert!(
            direct.sup_distance(&via_projection) <= 1e-9,
            "seed {seed}: projected distribution moved by {}",
            direct.sup_distance(&via_projection)
        );
    }
    println!("acceptance 06 algebra identities: PASS (50 random fixtures)");
}

#[test]
fn criterion_07_stream_run_matches_projected_distribution() {
    let fig = skewed_two_state();
    let fixtures: Vec<(Pfsa, xpfsa::LabeledGraph)> = vec![
        (fig.clone(), fig.graph()),
        (fig.clone(), random_graph(1, 2, 1)),
        (fig.clone(), random_graph(3, 2, 7002)),
        (random_machine(3, 2, 7000), random_graph(2, 2, 7001)),
        (random_machine(2, 2, 7003), random_graph(2, 2, 7004)),
    ];
    for (i, (g, h)) in fixtures.iter().enumerate() {
        let expected = projected_distribution(g, h).unwrap();
        let s = g.sample_stream(N, 7100 + i as u64).unwrap();
        let observed = stream_run(h, &s).unwrap();
        let gap = expected.sup_distance(&observed);
        assert!(gap <= 0.005, "fixture {i}: gap {gap}");
    }
    println!("acceptance 07 empirical bridge: PASS (5 fixtures within 0.005)");
}

#[test]
fn criterion_08_prediction() {
    // exact models: conditioning on B's last symbol '0' must give [0.8, 0.2]
    let self_model = exact_b_self_model();
    let cross = exact_b_to_a_cross_model();
    let history = SymbolStream::parse(Alphabet::binary(), "0").unwrap();
    let tau = predict_next(&self_model, &cross, &history).unwrap();
    assert!((tau.get(0) - 0.8).abs() <= 1e-9, "tau {:?}", tau.weights());
    assert!((tau.get(1) - 0.2).abs() <= 1e-9);

    // inferred models land within 0.02
    let spec = CoupledSystemSpec::skewed_binary_example();
    let (a, b) = simulate_coupled(&spec, N, 2027).unwrap();
    let inferred_self = xpfsa::infer_pfsa(&b, &cfg()).unwrap();
    let inferred_cross = infer_xpfsa(&b, &a, &cfg()).unwrap().machine;
    let tau_inferred = predict_next(&inferred_self, &inferred_cross, &history).unwrap();
    assert!(
        (tau_inferred.get(0) - 0.8).abs() <= 0.02,
        "inferred tau {:?}",
        tau_inferred.weights()
    );

    // fusion weight arithmetic, by hand: 0.3 and 0.1 normalize to 3/4, 1/4
    let taus = vec![
        Distribution::new(vec![1.0, 0.0]).unwrap(),
        Distribution::new(vec![0.0, 1.0]).unwrap(),
    ];
    let fused = fuse_predictions(&taus, &[0.3, 0.1], None).unwrap();
    assert!((fused.get(0) - 0.75).abs() <= 1e-12);
    assert!((fused.get(1) - 0.25).abs() <= 1e-12);
    println!(
        "acceptance 08 prediction: PASS (exact {:?}, inferred {:?})",
        tau.weights(),
        tau_inferred.weights()
    );
}

#[test]
fn criterion_09_error_bound() {
    // analytic coefficient from the exact cross-model, occupancy from the
    // exact projection of the conditioning process
    let cross = exact_b_to_a_cross_model();
    let occupancy = projected_distribution(&exact_b_self_model(), &cross.graph()).unwrap();
    let base = Distribution::new(vec![0.5, 0.5]).unwrap();
    let exact = gamma_analytic(&base, &cross, &occupancy).unwrap().value;
    assert!((exact - 0.278072).abs() < 1e-6);

    let spec = CoupledSystemSpec::skewed_binary_example();
    let (a, b) = simulate_coupled(&spec, N, 2028).unwrap();
    let estimated = gamma_empirical(&b, &a, &cfg()).unwrap().gamma;

    // bound for epsilon = 0.05, binary target, unit base entropy
    let epsilon = 0.05f64;
    let arity = 2.0f64;
    let bound = (1.0 / 1.0)
        * (epsilon * ((arity - 1.0) / epsilon).log2()
            + (1.0 - epsilon) * (1.0 / (1.0 - epsilon)).log2());
    let gap = (estimated - exact).abs();
    assert!(gap <= bound, "gap {gap} exceeds bound {bound}");
    println!("acceptance 09 error bound: PASS (gap {gap:.5} <= bound {bound:.5})");
}

#[test]
fn criterion_10_pipeline_smoke() {
    // 26 columns of 548 samples: a deterministic stand-in for weekly
    // search-frequency data
    let mut csv = String::new();
    let names: Vec<String> = (b'a'..=b'z').map(|c| (c as char).to_string()).collect();
    csv.push_str(&names.join(","));
    csv.push('\n');
    let mut state = 0x2545F4914F6CDD1Du64;
    let mut level = vec![50.0f64; 26];
    for _ in 0..548 {
        let mut row = Vec::with_capacity(26);
        for l in level.iter_mut() {
            // xorshift noise in [-5, 5]
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let step = (state % 1000) as f64 / 100.0 - 5.0;
            *l = (*l + step).clamp(0.0, 100.0);
            row.push(format!("{l:.2}"));
        }
        csv.push_str(&row.join(","));
        csv.push('\n');
    }

    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("trends.csv");
    std::fs::write(&csv_path, &csv).unwrap();

    let started = Instant::now();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let prefix = dir.path().join(format!("net{run}"));
        let status = bin()
            .arg("network")
            .arg(&csv_path)
            .args(["--quantizer", "updown", "--min-length", "500"])
            .arg("-o")
            .arg(&prefix)
            .status()
            .unwrap();
        assert!(status.success());
        outputs.push((
            std::fs::read(prefix.with_extension("json")).unwrap(),
            std::fs::read(prefix.with_extension("dot")).unwrap(),
        ));
    }
    let elapsed = started.elapsed();

    // deterministic: both runs byte-identical
    assert_eq!(outputs[0], outputs[1], "network output is not deterministic");

    let doc: serde_json::Value = serde_json::from_slice(&outputs[0].0).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 26);
    let arcs = doc["arcs"].as_array().unwrap();
    let skipped = doc["skipped"].as_array().unwrap();
    assert_eq!(arcs.len() + skipped.len(), 26 * 25);
    for arc in arcs {
        let gamma = arc["gamma"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&gamma), "gamma {gamma}");
    }
    assert!(!outputs[0].1.is_empty());
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!(
        "acceptance 10 pipeline smoke: PASS ({} arcs, {} skipped, {elapsed:?})",
        arcs.len(),
        skipped.len()
    );
}
