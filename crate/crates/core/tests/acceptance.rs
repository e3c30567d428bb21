//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quadent_core::catalog::{make_basis, make_state, validate_orthonormal, BASIS_NAMES};
use quadent_core::densecode::{capacity, SenderChoice};
use quadent_core::entanglement::{pair_concurrence, profile, three_tangle_pure};
use quadent_core::locc::{
    candidate_set, check_certificate, protocol, protocol_certificate, run_discrimination, PROTOCOL_NAMES,
};
use quadent_core::measure::{enumerate_outcomes, MeasurementPlan};
use quadent_core::teleport::{builtin_ids, builtin_scenario, run_scenario};
use quadent_core::{LocalUnitary, PureState, TOL};

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(fails: Vec<String>, ok: String) -> Outcome {
    if fails.is_empty() {
        Outcome { pass: true, detail: ok }
    } else {
        Outcome { pass: false, detail: fails.join("; ") }
    }
}

const NEGATIVES: &[&str] = &["w_plain_1q", "q4_bob4_1q", "omega_2q_bell_bell_paulis"];

fn teleport_positives() -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    for id in builtin_ids().iter().filter(|id| !NEGATIVES.contains(&id.as_str())) {
        let s = builtin_scenario(id).unwrap();
        let r = run_scenario(&s, SEED).unwrap();
        let want = s.expected.as_ref().and_then(|e| e.cost_cbits);
        count += 1;
        if !r.feasible || r.worst_fidelity < 1.0 - TOL {
            fails.push(format!("{id} worst fidelity {:.3e}", r.worst_fidelity));
        }
        if want.is_some_and(|c| c != r.cost_cbits) {
            fails.push(format!("{id} cost {} (expected {})", r.cost_cbits, want.unwrap()));
        }
    }
    outcome(fails, format!("{count} scenarios at fidelity 1, costs match"))
}

fn teleport_negatives() -> Outcome {
    let mut fails = Vec::new();
    let mut worst = Vec::new();
    for id in NEGATIVES {
        let r = run_scenario(&builtin_scenario(id).unwrap(), SEED).unwrap();
        match &r.certificate {
            Some(c) if c.is_bounded_away() => worst.push(format!("{id} {:.4}", c.worst_fidelity)),
            _ => fails.push(format!("{id} not certified infeasible")),
        }
    }
    outcome(fails, format!("certified infeasible: {}", worst.join(", ")))
}

fn dense_coding() -> Outcome {
    // (state, DC1 sender, expected N per scenario; None = "N < 4"; skipped when absent)
    type Row = (&'static str, SenderChoice, Option<usize>, Option<usize>, Option<usize>);
    let rows: Vec<Row> = vec![
        ("GHZ4", SenderChoice::Fixed(vec![0]), Some(4), Some(8), Some(16)),
        ("W4", SenderChoice::Fixed(vec![0]), None, Some(8), Some(8)),
        ("W11", SenderChoice::Best(1), Some(4), Some(0), Some(8)),
        ("Omega", SenderChoice::Fixed(vec![0]), Some(4), Some(16), Some(16)),
        ("Q4", SenderChoice::Fixed(vec![1]), Some(4), Some(8), Some(8)),
        ("Q5", SenderChoice::Fixed(vec![1]), Some(4), Some(8), Some(16)),
    ];
    let mut fails = Vec::new();
    let mut seen = Vec::new();
    for (name, dc1, n1, n2, n3) in rows {
        let s = make_state(name, &[]).unwrap();
        let got1 = capacity(&s, &dc1, false).unwrap().max_orthogonal;
        let ok1 = match n1 {
            Some(n) => got1 == n,
            None => got1 < 4,
        };
        if !ok1 {
            fails.push(format!("{name} DC1 N={got1}"));
        }
        let mut line = format!("{name} ({got1}");
        for (k, want) in [(2usize, n2), (3, n3)] {
            if want == Some(0) {
                line.push_str(", -");
                continue;
            }
            let got = capacity(&s, &SenderChoice::Fixed((0..k).collect()), false).unwrap().max_orthogonal;
            line.push_str(&format!(", {got}"));
            if Some(got) != want {
                fails.push(format!("{name} DC{k} N={got} (expected {})", want.unwrap()));
            }
        }
        seen.push(line + ")");
    }
    // Q4 DC1 on qubit 0 must stay below 4.
    let q4 = make_state("Q4", &[]).unwrap();
    let q4_first = capacity(&q4, &SenderChoice::Fixed(vec![0]), false).unwrap().max_orthogonal;
    if q4_first >= 4 {
        fails.push(format!("Q4 DC1 at qubit 0 N={q4_first}"));
    }
    outcome(fails, seen.join(" "))
}

fn basis_hygiene() -> Outcome {
    let mut fails = Vec::new();
    let mut corrected = BTreeSet::new();
    for name in BASIS_NAMES {
        let b = make_basis(name).unwrap();
        let v = validate_orthonormal(&b);
        if !v.passed {
            fails.push(format!("{name} Gram deviation {:.1e}", v.max_offdiag.max(v.max_norm_deviation)));
        }
        for c in b.corrections() {
            if c.certificate.corrected_max_overlap > 1e-12 || c.certificate.method.is_empty() {
                fails.push(format!("{name}/{} lacks a derivation certificate", c.label));
            }
            corrected.insert(format!("{name}/{}", c.label));
        }
    }
    if !corrected.iter().any(|c| c == "omega16/Ω15") {
        fails.push("Ω15 correction missing".into());
    }
    for id in ["w11_1q", "q5_1q_varphi"] {
        let r = run_scenario(&builtin_scenario(id).unwrap(), SEED).unwrap();
        if r.printed_mismatches.len() != 1 {
            fails.push(format!("{id} flags {} printed residuals", r.printed_mismatches.len()));
        }
    }
    let extra: Vec<&String> = corrected.iter().filter(|c| !c.starts_with("omega16/")).collect();
    if !extra.is_empty() {
        fails.push(format!(
            "corrections beyond Ω15 are needed for Gram identity or support: {}",
            extra.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
        ));
    }
    outcome(fails, format!("{} bases orthonormal; corrections {:?}", BASIS_NAMES.len(), corrected))
}

fn entanglement() -> Outcome {
    let mut fails = Vec::new();
    for name in ["GHZ4", "W4", "Omega", "Q4", "Q5"] {
        let p = profile(&make_state(name, &[]).unwrap()).unwrap();
        if !p.genuine {
            fails.push(format!("{name} max purity {:.6}", p.max_purity()));
        }
    }
    let check_pairs = |name: &str, want: f64, fails: &mut Vec<String>| {
        let s = make_state(name, &[]).unwrap().state;
        for i in 0..4 {
            for j in i + 1..4 {
                let c = pair_concurrence(&s, i, j).unwrap();
                if (c - want).abs() > 1e-9 {
                    fails.push(format!("{name} C({i},{j})={c:.6}"));
                }
            }
        }
    };
    check_pairs("W4", 0.5, &mut fails);
    check_pairs("Omega", 0.0, &mut fails);
    check_pairs("Q5", 0.0, &mut fails);
    let g = three_tangle_pure(&make_state("GHZ3", &[]).unwrap().state).unwrap();
    let w = three_tangle_pure(&make_state("W3", &[]).unwrap().state).unwrap();
    if (g - 1.0).abs() > 1e-9 || w.abs() > 1e-9 {
        fails.push(format!("tangles GHZ3={g} W3={w}"));
    }
    outcome(fails, format!("all genuine; W4 pairs 0.5; Omega/Q5 pairs 0; tau GHZ3={g:.3} W3={w:.3}"))
}

fn locc() -> Outcome {
    let mut fails = Vec::new();
    let runs = [
        ("ghz_8", "bell13_bell24", Some(2)),
        ("ghz_8", "pm4_ghz3", Some(1)),
        ("omega_4", "comp13_comp24", None),
        ("w_4", "bell13_bell24", None),
        ("q5_4", "comp13_comp24", None),
    ];
    for (set, proto, cost) in runs {
        let c = candidate_set(set).unwrap();
        let p = protocol(proto).unwrap();
        let r = run_discrimination(&c, &p).unwrap();
        if !r.success {
            fails.push(format!("{set}/{proto} failed"));
        }
        if cost.is_some_and(|k| k != r.inter_receiver_cbits) {
            fails.push(format!("{set}/{proto} cost {}", r.inter_receiver_cbits));
        }
        if proto != "pm4_ghz3" && !check_certificate(&c, &protocol_certificate(&c, &p).unwrap()).unwrap().passed {
            fails.push(format!("{set} certificate rejected"));
        }
    }
    let sixteen = candidate_set("omega_16").unwrap();
    for proto in PROTOCOL_NAMES {
        if run_discrimination(&sixteen, &protocol(proto).unwrap()).unwrap().success {
            fails.push(format!("omega_16 distinguished by {proto}"));
        }
    }
    outcome(fails, "GHZ 8-set (2 and 1 cbits), Omega/W/Q5 4-sets, certificates pass; Omega 16-set fails".into())
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut fails = Vec::new();
    let mut worst_norm = 0.0f64;
    let mut worst_unit = 0.0f64;
    let mut worst_prob = 0.0f64;
    for case in 0..200 {
        let n = 2 + case % 3;
        let s = PureState::haar_random(n, &mut rng).unwrap();
        let u = LocalUnitary::haar_random(1 + case % 2, &mut rng).unwrap();
        let targets: Vec<usize> = (0..u.num_qubits()).map(|k| (case + k) % n).collect();
        let back = s.apply_local(&u, &targets).unwrap().apply_local(&u.adjoint(), &targets).unwrap();
        let dev = back.amplitudes().iter().zip(s.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        worst_unit = worst_unit.max(dev);
        let p1: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let p2: Vec<usize> = (0..n).rev().collect();
        let composed: Vec<usize> = p1.iter().map(|&i| p2[i]).collect();
        let two = s.permute_qubits(&p1).unwrap().permute_qubits(&p2).unwrap();
        if two != s.permute_qubits(&composed).unwrap() {
            fails.push(format!("permutation composition case {case}"));
        }
        let t = two.tensor(&PureState::haar_random(1, &mut rng).unwrap()).unwrap();
        worst_norm = worst_norm.max((t.norm() - 1.0).abs());
        let plan = MeasurementPlan::new(vec![(vec![case % n], make_basis("plus_minus").unwrap())]).unwrap();
        let total: f64 = enumerate_outcomes(&s, &plan).unwrap().iter().map(|b| b.probability).sum();
        worst_prob = worst_prob.max((total - 1.0).abs());
    }
    if worst_norm > 1e-12 || worst_unit > 1e-12 || worst_prob > 1e-10 {
        fails.push(format!("norm {worst_norm:.1e} unitary {worst_unit:.1e} probability {worst_prob:.1e}"));
    }
    let ghz = make_state("GHZ4", &[]).unwrap().state;
    let joint = PureState::haar_random(1, &mut rng).unwrap().tensor(&ghz).unwrap();
    let (g3, pm) = (make_basis("ghz3_full").unwrap(), make_basis("plus_minus").unwrap());
    let one = MeasurementPlan::new(vec![(vec![0, 1, 2, 3], g3.tensor(&pm).unwrap())]).unwrap();
    let two = MeasurementPlan::new(vec![(vec![0, 1, 2], g3), (vec![3], pm)]).unwrap();
    let a = enumerate_outcomes(&joint, &one).unwrap();
    let b = enumerate_outcomes(&joint, &two).unwrap();
    let same = a.len() == b.len()
        && a.iter()
            .zip(&b)
            .all(|(x, y)| x.labels[0] == y.labels.join("⊗") && (x.probability - y.probability).abs() < 1e-12);
    if !same {
        fails.push("GHZ 3+1 refinement differs".into());
    }
    outcome(fails, format!("200 cases; norm {worst_norm:.1e}, U†U {worst_unit:.1e}, probability sum {worst_prob:.1e}; 3+1 refinement equal"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("teleportation positives", teleport_positives),
        ("teleportation negatives", teleport_negatives),
        ("dense coding table", dense_coding),
        ("basis hygiene", basis_hygiene),
        ("entanglement profile", entanglement),
        ("LOCC discrimination", locc),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} criterion {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
