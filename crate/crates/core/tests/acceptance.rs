//! Acceptance criteria, one PASS/FAIL line each.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use cyclo_core::bicyclopermutohedron::{
    build_qp, expected_qp_critical_counts, expected_qp_homology, qp_morse_data, qp_path_report,
    reflection_sign, verify_boundary_dichotomy,
};
use cyclo_core::complex::{CellId, ChainComplex};
use cyclo_core::cp_morse::{binomial, cp_morse_data, expected_cp_homology, path_lemma_report};
use cyclo_core::cyclopermutohedron::{build_cp, random_good_triple};
use cyclo_core::discrete_morse::MorseComplex;
use cyclo_core::homology::{
    homology_mod2, homology_of_boundaries, homology_z, mod2_betti_of_boundaries,
};
use cyclo_core::linkage::{build_moduli_complex, build_reduced_moduli, LengthVector};
use cyclo_core::ResourceGuard;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn guard() -> ResourceGuard {
    ResourceGuard::default()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn qp_integral_homology() -> Outcome {
    let mut seen = Vec::new();
    for n in 3..=6 {
        let h = homology_z(&build_qp(n, &guard()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let want = expected_qp_homology(n);
        ensure(h == want, || format!("n={n}: got {h}, expected {want}"))?;
        seen.push(format!("n={n} {h}"));
    }
    Ok(seen.join(", "))
}

fn qp_mod2_homology() -> Outcome {
    let mut seen = Vec::new();
    for n in 3..=7 {
        let b = homology_mod2(&build_qp(n, &guard()).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let want = expected_qp_critical_counts(n);
        ensure(b == want, || format!("n={n}: got {b:?}, expected {want:?}"))?;
        seen.push(format!("n={n} {b:?}"));
    }
    Ok(seen.join(", "))
}

fn cp_homology() -> Outcome {
    let mut seen = Vec::new();
    for n in 3..=6 {
        let cc = build_cp(n, &guard()).map_err(|e| e.to_string())?;
        let h = homology_z(&cc).map_err(|e| e.to_string())?;
        ensure(h.is_torsion_free(), || format!("n={n}: torsion in {h}"))?;
        let top = n - 2;
        for i in 0..top {
            ensure(h.betti[i] == binomial(n, i), || {
                format!("n={n}: b_{i} = {}", h.betti[i])
            })?;
        }
        let critical = cp_morse_data(n, &guard())
            .map_err(|e| e.to_string())?
            .morse
            .counts()[top];
        let want = binomial(n, 2) + (1 << n) - n - 1;
        ensure(h.betti[top] == want && critical == want, || {
            format!("n={n}: top rank {} vs {want}", h.betti[top])
        })?;
        ensure(
            h.euler_characteristic() == cc.euler_characteristic(),
            || format!("n={n}: Euler characteristic"),
        )?;
        ensure(h == expected_cp_homology(n), || format!("n={n}: {h}"))?;
        seen.push(format!("n={n} top {}", h.betti[top]));
    }
    let closed = |n: usize| (1usize << n) + ((1usize << n) - 3 * n - 2) / 2;
    ensure(closed(4) == 17, || "alternative closed form at n=4".into())?;
    let others: Vec<String> = [5, 6]
        .iter()
        .map(|&n| {
            format!(
                "n={n}: {} vs {}",
                closed(n),
                binomial(n, 2) + (1 << n) - n - 1
            )
        })
        .collect();
    Ok(format!(
        "{}; alternative closed form agrees only at n=4 ({})",
        seen.join(", "),
        others.join(", ")
    ))
}

fn morse_dichotomy() -> Outcome {
    for n in 3..=6 {
        let q = qp_morse_data(n, &guard()).map_err(|e| e.to_string())?;
        verify_boundary_dichotomy(&q.morse).map_err(|e| format!("qp n={n}: {e}"))?;
        let c = cp_morse_data(n, &guard()).map_err(|e| e.to_string())?;
        ensure(c.morse.is_boundary_zero(), || {
            format!("cp n={n}: nonzero Morse boundary")
        })?;
    }
    Ok("qp zero in odd dimensions and 2-full rank in even ones; cp zero, n=3..6".into())
}

fn path_count_law() -> Outcome {
    let mut notes = Vec::new();
    let mut failures = Vec::new();
    for n in 3..=5 {
        let c = path_lemma_report(&cp_morse_data(n, &guard()).map_err(|e| e.to_string())?);
        if !c.bad_counts.is_empty() || !c.shape_mismatches.is_empty() {
            failures.push(format!(
                "cp n={n}: {:?} {:?}",
                c.bad_counts, c.shape_mismatches
            ));
        }
        let q = qp_path_report(&qp_morse_data(n, &guard()).map_err(|e| e.to_string())?);
        if !q.count_law_holds() {
            failures.push(format!("qp n={n}: path counts {:?}", q.bad_counts));
        }
        if !q.literal_shapes_hold() {
            let shown: Vec<&str> = q
                .literal_outliers
                .iter()
                .take(2)
                .map(String::as_str)
                .collect();
            failures.push(format!(
                "qp n={n}: {} two-path targets outside the five listed shapes, e.g. {}",
                q.literal_outliers.len(),
                shown.join("; ")
            ));
        }
        if !q.extended_shapes_hold() {
            failures.push(format!(
                "qp n={n}: extended family mismatch {:?}",
                q.extended_mismatches
            ));
        }
        notes.push(format!(
            "n={n}: cp {} and qp {} two-path pairs",
            c.two_path_pairs, q.two_path_pairs
        ));
    }
    if failures.is_empty() {
        Ok(notes.join(", "))
    } else {
        Err(format!(
            "{}. Path counts are always 0 or 2 and the targets are exactly the listed shapes plus (I, T, i∪∇, N∖T) \
             for subsets T with |T| ≥ 2 and min T > I, which the listed shapes omit",
            failures.join(" | ")
        ))
    }
}

fn good_triples_negative() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..1000 {
        let t = random_good_triple(6, &mut rng);
        let s = t.sign().map_err(|e| e.to_string())?;
        ensure(s == -1, || {
            format!("{} | {} in {}: product {s}", t.t1, t.t2, t.s)
        })?;
    }
    Ok("1000 sampled triples in n=6, seed 2024".into())
}

fn morse_agrees<C: CellId>(
    label: &str,
    cc: &ChainComplex<C>,
    mc: &MorseComplex,
) -> Result<(), String> {
    let direct = homology_z(cc).map_err(|e| e.to_string())?;
    let morse = homology_of_boundaries(&mc.counts(), &mc.boundary);
    ensure(morse == direct, || {
        format!("{label}: Morse {morse} vs direct {direct}")
    })?;
    let d2 = homology_mod2(cc).map_err(|e| e.to_string())?;
    let m2 = mod2_betti_of_boundaries(&mc.counts(), &mc.boundary);
    ensure(m2 == d2, || format!("{label}: mod 2 {m2:?} vs {d2:?}"))
}

fn morse_soundness() -> Outcome {
    for n in 3..=5 {
        let c = cp_morse_data(n, &guard()).map_err(|e| e.to_string())?;
        morse_agrees(&format!("cp n={n}"), &c.complex, &c.morse)?;
        let q = qp_morse_data(n, &guard()).map_err(|e| e.to_string())?;
        morse_agrees(&format!("qp n={n}"), &q.complex, &q.morse)?;
    }
    Ok("cp and qp, n=3..5, over Z and Z2".into())
}

fn sign_correction() -> Outcome {
    let mut cells = 0;
    for n in 3..=5 {
        for c in build_cp(n, &guard())
            .map_err(|e| e.to_string())?
            .all_cells()
            .iter()
            .flatten()
        {
            let (f, o) = (reflection_sign(c), common::frame_reflection_sign(c));
            ensure(f == o, || format!("{c}: formula {f}, frames {o}"))?;
            cells += 1;
        }
    }
    Ok(format!("{cells} cells, n=3..5"))
}

fn linkage_pentagon() -> Outcome {
    let ell = LengthVector::from_integers(&[1, 1, 1, 1, 1]).map_err(|e| e.to_string())?;
    let full = build_moduli_complex(&ell, &guard()).map_err(|e| e.to_string())?;
    let h = homology_z(&full).map_err(|e| e.to_string())?;
    ensure(h.to_string() == "(Z; Z^8; Z)", || format!("full: {h}"))?;
    ensure(
        full.euler_characteristic() == -6 && h.euler_characteristic() == -6,
        || "full: Euler characteristic".into(),
    )?;
    let red = build_reduced_moduli(&ell, &guard()).map_err(|e| e.to_string())?;
    let hr = homology_z(&red).map_err(|e| e.to_string())?;
    ensure(hr.to_string() == "(Z; Z^4 + Z2; 0)", || {
        format!("reduced: {hr}")
    })?;
    ensure(
        red.euler_characteristic() == -3 && hr.euler_characteristic() == -3,
        || "reduced: Euler characteristic".into(),
    )?;
    Ok(format!("{h} and {hr}"))
}

fn structural() -> Outcome {
    let check =
        |label: String, r1: Result<(), String>, r2: Result<(), String>| -> Result<(), String> {
            r1.map_err(|e| format!("{label}: {e}"))?;
            r2.map_err(|e| format!("{label}: {e}"))
        };
    for n in 3..=6 {
        let cp = build_cp(n, &guard()).map_err(|e| e.to_string())?;
        check(
            format!("cp n={n}"),
            cp.verify_diamond().map_err(|e| e.to_string()),
            cp.verify_boundary_squared().map_err(|e| e.to_string()),
        )?;
        let qp = build_qp(n, &guard()).map_err(|e| e.to_string())?;
        check(
            format!("qp n={n}"),
            qp.verify_diamond().map_err(|e| e.to_string()),
            qp.verify_boundary_squared().map_err(|e| e.to_string()),
        )?;
    }
    for lengths in ["1,1,1,1,1", "3,1,1,1,1", "1,1,1,1,1,1,1", "2,3,5/2,1,1,1/3"] {
        let ell: LengthVector = lengths
            .parse()
            .map_err(|e: cyclo_core::linkage::LinkageError| e.to_string())?;
        for (label, cc) in [
            ("moduli", build_moduli_complex(&ell, &guard())),
            ("reduced moduli", build_reduced_moduli(&ell, &guard())),
        ] {
            let cc = cc.map_err(|e| format!("{label} {lengths}: {e}"))?;
            check(
                format!("{label} {lengths}"),
                cc.verify_diamond().map_err(|e| e.to_string()),
                cc.verify_boundary_squared().map_err(|e| e.to_string()),
            )?;
        }
    }
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_cyclo"))
        .args(["verify", "all", "--max-n", "5"])
        .output()
        .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(out.status.code() == Some(0), || {
        format!(
            "verify exited {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stdout)
        )
    })?;
    ensure(elapsed < Duration::from_secs(120), || {
        format!("verify took {elapsed:.1?}")
    })?;
    Ok(format!(
        "cp, qp n=3..6 and four length vectors; `verify all --max-n 5` exit 0 in {elapsed:.2?}"
    ))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("quotient integral homology, n=3..6", qp_integral_homology),
        ("quotient mod-2 homology, n=3..7", qp_mod2_homology),
        ("cyclopermutohedron homology, n=3..6", cp_homology),
        ("Morse boundary dichotomy, n=3..6", morse_dichotomy),
        ("path-count law and two-path shapes, n=3..5", path_count_law),
        ("good triples multiply to -1", good_triples_negative),
        ("Morse homology equals direct homology", morse_soundness),
        ("reflection sign formula matches frames", sign_correction),
        ("equilateral pentagon moduli spaces", linkage_pentagon),
        ("structural checks and verify runtime", structural),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS criterion {}: {title} [{t:.2?}] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {title} [{t:.2?}] {why}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
