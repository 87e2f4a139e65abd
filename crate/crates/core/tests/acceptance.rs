//! Acceptance gate: seven end-to-end criteria, each printing a single
//! PASS/FAIL line with its headline tolerances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use polyinfo::builtins::{builtin, Builtin};
use polyinfo::camouflage::{
    camouflage_verify, diffuse, masked_parity, recover_search, DiffusionMap, RelationTest,
};
use polyinfo::common::{
    exact_common_information, functional_common_information, gacs_korner,
    mss_common_information, singleton_groups, wyner_common_information,
};
use polyinfo::dist::{rat, JointDistribution, VariableSet};
use polyinfo::io::profile_csv;
use polyinfo::pid::{pid_broja, pid_imin, PidResult};
use polyinfo::profiles::{complexity_profile, connected_informations, marginal_utility, maxent_projection};
use polyinfo::scalar::{
    disequilibrium, extropy, lmrp_complexity, perplexity, renyi_entropy, tsallis_entropy,
};
use polyinfo::secrecy::{intrinsic_mi, reduced_intrinsic_mi};
use polyinfo::shannon::{
    caekl, comutual_information, conditional_entropy, dual_total_correlation, entropy,
    idiagram, interaction_information, residual_entropy, total_correlation, tse_complexity,
};
use polyinfo::symbol::Symbol;

const EXACT: f64 = 1e-6;
const PRINTED: f64 = 5e-4;
const BRACKET_WIDTH: f64 = 1e-4;

fn verdict(name: &str, ok: bool, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    println!("[acceptance] {name}: {status} ({detail})");
    assert!(ok, "{name} failed: {detail}");
}

fn xyz() -> (VariableSet, VariableSet, VariableSet) {
    (
        VariableSet::of(["X"]),
        VariableSet::of(["Y"]),
        VariableSet::of(["Z"]),
    )
}

fn bracket_ok(lower: f64, upper: f64, expected: f64) -> bool {
    upper - lower <= BRACKET_WIDTH && lower - EXACT <= expected && expected <= upper + EXACT
}

#[test]
fn criterion_1_measure_table() {
    let (x, y, z) = xyz();
    let mut failures: Vec<String> = Vec::new();
    for (name, b, expected_k, expected_intrinsic) in [
        ("dyadic", Builtin::Dyadic, 0.0, 1.0),
        ("triadic", Builtin::Triadic, 1.0, 0.0),
    ] {
        let d = builtin(b).unwrap();
        let groups = singleton_groups(&d);
        let mut check = |measure: &str, got: f64, want: f64, tol: f64| {
            if (got - want).abs() > tol {
                failures.push(format!("{name} {measure}: got {got}, want {want}"));
            }
        };
        let whole = d.variable_set();
        check("H", entropy(&d, &whole).unwrap(), 3.0, EXACT);
        check("H2", renyi_entropy(&d, 2.0).unwrap(), 3.0, EXACT);
        check("S2", tsallis_entropy(&d, 2.0).unwrap(), 0.875, EXACT);
        check(
            "I",
            comutual_information(&d, &[x.clone(), y.clone(), z.clone()], &VariableSet::empty())
                .unwrap(),
            0.0,
            EXACT,
        );
        check("T", total_correlation(&d, None).unwrap(), 3.0, EXACT);
        check("B", dual_total_correlation(&d, None).unwrap(), 3.0, EXACT);
        check("J", caekl(&d, None).unwrap(), 1.5, EXACT);
        check("II", interaction_information(&d, None).unwrap(), 0.0, EXACT);
        check("K", gacs_korner(&d, &groups).unwrap(), expected_k, EXACT);
        check("F", functional_common_information(&d, &groups).unwrap(), 3.0, EXACT);
        check("M", mss_common_information(&d, &groups).unwrap(), 3.0, EXACT);
        check("X", extropy(&d), 1.349, PRINTED);
        check("R", residual_entropy(&d).unwrap(), 0.0, EXACT);
        check("P", perplexity(&d).unwrap(), 8.0, EXACT);
        check("D", disequilibrium(&d), 0.761, PRINTED);
        check("LMRP", lmrp_complexity(&d).unwrap(), 0.381, PRINTED);
        check("TSE", tse_complexity(&d).unwrap(), 2.0, EXACT);

        let c = wyner_common_information(&d, &groups, None, 0, 7).unwrap();
        if !bracket_ok(c.lower, c.upper, 3.0) {
            failures.push(format!("{name} C bracket [{}, {}]", c.lower, c.upper));
        }
        let g = exact_common_information(&d, &groups, None, 0, 7).unwrap();
        if !bracket_ok(g.lower, g.upper, 3.0) {
            failures.push(format!("{name} G bracket [{}, {}]", g.lower, g.upper));
        }
        let down = intrinsic_mi(&d, &x, &y, &z, 4, 7).unwrap();
        if !bracket_ok(down, down, expected_intrinsic) {
            failures.push(format!("{name} intrinsic {down}"));
        }
        let ddown = reduced_intrinsic_mi(&d, &x, &y, &z, 1, 4, 7).unwrap();
        if !bracket_ok(ddown.lower, ddown.upper, expected_intrinsic) {
            failures.push(format!(
                "{name} reduced intrinsic [{}, {}]",
                ddown.lower, ddown.upper
            ));
        }
    }
    verdict(
        "criterion 1, measure table",
        failures.is_empty(),
        &format!(
            "21 rows x 2 distributions, 1e-6/5e-4/bracket 1e-4; failures: {failures:?}"
        ),
    );
}

#[test]
fn criterion_2_idiagram_equality() {
    let dy = idiagram(&builtin(Builtin::Dyadic).unwrap()).unwrap();
    let tr = idiagram(&builtin(Builtin::Triadic).unwrap()).unwrap();
    // atoms sorted by subset size then mask: singles, pairs, triple
    let sorted = |d: &polyinfo::InfoDiagram| {
        let mut v: Vec<(u32, f64)> = d.atoms().collect();
        v.sort_by_key(|&(m, _)| (m.count_ones(), m));
        v.into_iter().map(|(_, a)| a).collect::<Vec<f64>>()
    };
    let expected = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0];
    let (a, b) = (sorted(&dy), sorted(&tr));
    let ok = a
        .iter()
        .zip(expected.iter())
        .all(|(got, want)| (got - want).abs() < 1e-9)
        && b
            .iter()
            .zip(expected.iter())
            .all(|(got, want)| (got - want).abs() < 1e-9)
        && a.iter().zip(b.iter()).all(|(p, q)| (p - q).abs() < 1e-12);
    verdict(
        "criterion 2, I-diagram equality",
        ok,
        &format!("atoms {a:?} vs {b:?}, expected (0,0,0,1,1,1,0) at 1e-9, pairwise 1e-12"),
    );
}

fn pid_matches(r: &PidResult, want: [f64; 4], tol: f64) -> bool {
    r.parts()
        .iter()
        .zip(want.iter())
        .all(|(g, w)| (g - w).abs() < tol)
}

/// Equal up to swapping the two unique components.
fn pid_equivalent(a: &PidResult, b: &PidResult, tol: f64) -> bool {
    let close = |p: f64, q: f64| (p - q).abs() < tol;
    close(a.redundancy, b.redundancy)
        && close(a.synergy, b.synergy)
        && ((close(a.unique[0], b.unique[0]) && close(a.unique[1], b.unique[1]))
            || (close(a.unique[0], b.unique[1]) && close(a.unique[1], b.unique[0])))
}

#[test]
fn criterion_3_pid() {
    let (x, y, z) = xyz();
    let mut ok = true;
    let mut detail = String::new();
    let dy = builtin(Builtin::Dyadic).unwrap();
    let tr = builtin(Builtin::Triadic).unwrap();
    let broja_dy = pid_broja(&dy, &[x.clone(), y.clone()], &z).unwrap();
    let broja_tr = pid_broja(&tr, &[x.clone(), y.clone()], &z).unwrap();
    if !pid_matches(&broja_dy, [0.0, 1.0, 1.0, 0.0], 1e-4) {
        ok = false;
        detail.push_str(&format!("dyadic broja {:?}; ", broja_dy.parts()));
    }
    if !pid_matches(&broja_tr, [1.0, 0.0, 0.0, 1.0], 1e-4) {
        ok = false;
        detail.push_str(&format!("triadic broja {:?}; ", broja_tr.parts()));
    }
    for (name, d) in [("dyadic", &dy), ("triadic", &tr)] {
        let r = pid_imin(d, &[x.clone(), y.clone()], &z).unwrap();
        if (r.redundancy - 1.0).abs() > 1e-9 || (r.synergy - 1.0).abs() > 1e-9 {
            ok = false;
            detail.push_str(&format!("{name} imin R={} S={}; ", r.redundancy, r.synergy));
        }
    }
    // invariance over all 6 assignments of the variables to (I0, I1, O)
    let roles = [
        (&x, &y, &z),
        (&y, &x, &z),
        (&x, &z, &y),
        (&z, &x, &y),
        (&y, &z, &x),
        (&z, &y, &x),
    ];
    for (name, d) in [("dyadic", &dy), ("triadic", &tr)] {
        let base_b = pid_broja(d, &[roles[0].0.clone(), roles[0].1.clone()], roles[0].2).unwrap();
        let base_i = pid_imin(d, &[roles[0].0.clone(), roles[0].1.clone()], roles[0].2).unwrap();
        for (a, b, o) in &roles[1..] {
            let rb = pid_broja(d, &[(*a).clone(), (*b).clone()], o).unwrap();
            let ri = pid_imin(d, &[(*a).clone(), (*b).clone()], o).unwrap();
            if !pid_equivalent(&rb, &base_b, 1e-4) || !pid_equivalent(&ri, &base_i, 1e-6) {
                ok = false;
                detail.push_str(&format!("{name} not permutation invariant; "));
            }
        }
    }
    verdict(
        "criterion 3, partial information decomposition",
        ok,
        &format!(
            "broja (0,1,1,0)/(1,0,0,1) at 1e-4, imin R=S=1 at 1e-9, 6 permutations; {detail}"
        ),
    );
}

#[test]
fn criterion_4_profiles() {
    let dy = builtin(Builtin::Dyadic).unwrap();
    let tr = builtin(Builtin::Triadic).unwrap();
    let mut ok = true;
    let mut detail = String::new();

    let cp_dy = complexity_profile(&dy).unwrap();
    let cp_tr = complexity_profile(&tr).unwrap();
    let expected = [3.0, 3.0, 0.0];
    for (p, name) in [(&cp_dy, "dyadic"), (&cp_tr, "triadic")] {
        if !p
            .points
            .iter()
            .zip(expected.iter())
            .all(|(&(_, v), w)| (v - w).abs() < EXACT)
        {
            ok = false;
            detail.push_str(&format!("{name} complexity {:?}; ", p.points));
        }
    }
    if cp_dy.points != cp_tr.points {
        ok = false;
        detail.push_str("complexity profiles differ; ");
    }

    let mui_dy = profile_csv(&marginal_utility(&dy, 64).unwrap());
    let mui_tr = profile_csv(&marginal_utility(&tr, 64).unwrap());
    if mui_dy != mui_tr {
        ok = false;
        detail.push_str(&format!("mui files differ: {mui_dy:?} vs {mui_tr:?}; "));
    }

    let conn = |d: &JointDistribution| -> Vec<f64> {
        connected_informations(d)
            .unwrap()
            .points
            .iter()
            .map(|&(_, v)| v)
            .collect()
    };
    let (c_dy, c_tr) = (conn(&dy), conn(&tr));
    if (c_dy[0] - 3.0).abs() > EXACT || c_dy[1].abs() > EXACT {
        ok = false;
        detail.push_str(&format!("dyadic connected {c_dy:?}; "));
    }
    if (c_tr[0] - 2.0).abs() > EXACT || (c_tr[1] - 1.0).abs() > EXACT {
        ok = false;
        detail.push_str(&format!("triadic connected {c_tr:?}; "));
    }
    verdict(
        "criterion 4, expansion profiles",
        ok,
        &format!("complexity (3,3,0) both, mui files identical, connected (3,0)/(2,1); {detail}"),
    );
}

#[test]
fn criterion_5_camouflage() {
    let report = camouflage_verify(&builtin(Builtin::Camouflage4).unwrap());
    let masked = masked_parity(4).unwrap();
    let diagram = idiagram(&masked).unwrap();
    let high_order: Vec<f64> = diagram
        .atoms()
        .filter(|(m, _)| m.count_ones() >= 3)
        .map(|(_, v)| v)
        .collect();
    let residual = residual_entropy(&masked).unwrap();
    let ok = report.pass
        && high_order.len() == 5
        && high_order.iter().all(|v| v.abs() < 1e-9)
        && residual.abs() < 1e-9;
    verdict(
        "criterion 5, camouflage",
        ok,
        &format!(
            "verify violations {:?}, order>=3 atoms {high_order:?} (1e-9), residual {residual:e}",
            report.violations
        ),
    );
}

#[test]
fn criterion_6_diffusion_recovery() {
    let xor = builtin(Builtin::Xor3).unwrap();
    let spread = diffuse(&xor, &DiffusionMap::parity_pairs(&xor)).unwrap();
    let hits = recover_search(&spread, 3, RelationTest::Xor).unwrap();
    let planted = polyinfo::VariablePartition(vec![
        VariableSet::of(["V00", "V01"]),
        VariableSet::of(["V10", "V11"]),
        VariableSet::of(["V20", "V21"]),
    ]);
    let found = hits.iter().any(|(p, _)| *p == planted);

    let rows: Vec<(Vec<Symbol>, polyinfo::Rat)> = (0..64u64)
        .map(|w| {
            (
                (0..6).map(|i| Symbol::int(w >> (5 - i) & 1)).collect(),
                rat(1, 64),
            )
        })
        .collect();
    let names: Vec<String> = (0..6).map(|i| format!("B{i}")).collect();
    let indep = JointDistribution::from_outcomes(names, rows).unwrap();
    let none = recover_search(&indep, 3, RelationTest::Xor).unwrap().is_empty();
    verdict(
        "criterion 6, diffusion recovery",
        found && none,
        &format!("planted partition found: {found}, independent bits empty: {none}"),
    );
}

fn random_3var(rng: &mut ChaCha20Rng) -> JointDistribution {
    let weights: Vec<i64> = (0..8).map(|_| rng.gen_range(1..=1000)).collect();
    let total: i64 = weights.iter().sum();
    let rows = weights
        .iter()
        .enumerate()
        .map(|(cell, &w)| {
            (
                (0..3)
                    .map(|i| Symbol::int((cell >> (2 - i) & 1) as u64))
                    .collect(),
                rat(w, total),
            )
        })
        .collect();
    JointDistribution::from_outcomes(["X", "Y", "Z"], rows).unwrap()
}

#[test]
fn criterion_7_property_suites() {
    let (x, y, z) = xyz();
    let mut rng = ChaCha20Rng::seed_from_u64(20160901);
    let mut failures: Vec<String> = Vec::new();
    for trial in 0..500 {
        let d = random_3var(&mut rng);
        let whole = d.variable_set();
        let h = entropy(&d, &whole).unwrap();
        let diagram = idiagram(&d).unwrap();

        // atom reconstruction: H(V) = Σ atoms intersecting V
        for v in 1u32..8 {
            let set: VariableSet = (0..3)
                .filter(|i| v >> i & 1 == 1)
                .map(|i| d.variables()[i].clone())
                .collect();
            let rebuilt: f64 = diagram
                .atoms()
                .filter(|(m, _)| m & v != 0)
                .map(|(_, a)| a)
                .sum();
            if (entropy(&d, &set).unwrap() - rebuilt).abs() > 1e-9 {
                failures.push(format!("trial {trial}: atom reconstruction"));
            }
        }

        // chain rule
        let chain = entropy(&d, &x).unwrap()
            + conditional_entropy(&d, &y, &x).unwrap()
            + conditional_entropy(&d, &z, &x.union(&y)).unwrap();
        if (chain - h).abs() > 1e-12 {
            failures.push(format!("trial {trial}: chain rule"));
        }

        // intrinsic MI within its Shannon caps
        let down = intrinsic_mi(&d, &x, &y, &z, 0, 1).unwrap();
        let cmi = comutual_information(&d, &[x.clone(), y.clone()], &z).unwrap();
        let mi =
            comutual_information(&d, &[x.clone(), y.clone()], &VariableSet::empty()).unwrap();
        if down > cmi.min(mi) + EXACT {
            failures.push(format!("trial {trial}: intrinsic {down} > min({cmi}, {mi})"));
        }

        // PID consistency
        let r = pid_broja(&d, &[x.clone(), y.clone()], &z).unwrap();
        let mi_xo = comutual_information(&d, &[x.clone(), z.clone()], &VariableSet::empty())
            .unwrap();
        let mi_yo = comutual_information(&d, &[y.clone(), z.clone()], &VariableSet::empty())
            .unwrap();
        let consistent = (r.redundancy + r.unique[0] - mi_xo).abs() < EXACT
            && (r.redundancy + r.unique[1] - mi_yo).abs() < EXACT
            && (r.parts().iter().sum::<f64>() - r.total).abs() < EXACT
            && r.parts().iter().all(|&p| p > -EXACT);
        if !consistent {
            failures.push(format!("trial {trial}: pid consistency {:?}", r.parts()));
        }

        // IPF residuals and the connected-information telescope
        let m2 = maxent_projection(&d, 2).unwrap();
        if m2.residual > 1e-9 {
            failures.push(format!("trial {trial}: IPF residual {:e}", m2.residual));
        }
        let connected: f64 = connected_informations(&d)
            .unwrap()
            .points
            .iter()
            .map(|&(_, v)| v)
            .sum();
        let tc = total_correlation(&d, None).unwrap();
        if (connected - tc).abs() > EXACT {
            failures.push(format!("trial {trial}: Σ connected {connected} != T {tc}"));
        }

        // ordering chain
        let groups = singleton_groups(&d);
        let k = gacs_korner(&d, &groups).unwrap();
        let j = caekl(&d, None).unwrap();
        let b = dual_total_correlation(&d, None).unwrap();
        let c = wyner_common_information(&d, &groups, None, 0, 1).unwrap();
        let g = exact_common_information(&d, &groups, None, 0, 1).unwrap();
        let f = functional_common_information(&d, &groups).unwrap();
        if k > j + EXACT
            || b > c.upper + EXACT
            || c.upper > g.upper + EXACT
            || g.upper > f + EXACT
            || f > h + EXACT
        {
            failures.push(format!(
                "trial {trial}: ordering K={k} J={j} B={b} C={} G={} F={f} H={h}",
                c.upper, g.upper
            ));
        }

        if !failures.is_empty() {
            break;
        }
    }
    verdict(
        "criterion 7, property suites",
        failures.is_empty(),
        &format!("500 random 3-variable distributions; failures: {failures:?}"),
    );
}
