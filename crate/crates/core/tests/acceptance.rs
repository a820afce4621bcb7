//! Acceptance suite: one PASS/FAIL line per criterion, with runtime budgets.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kvdepth::depth2::{
    character_closed_form, chi13_multiplicity, d12_characters, expected_kernel_dim, f_seq,
    kernel_dim, poly_space_dim, soule_depth2_span, System,
};
use kvdepth::freealg::DEFAULT_WEIGHT_CAP;
use kvdepth::grt::{grt_check, grt_solve};
use kvdepth::lie::{soule, LieElem};
use kvdepth::tder::{div, ihara, krv_check, nu, qdiv, TDer};
use kvdepth::verify::{
    cocycle_defect, golden_bracket_check, proportional, random_tder, trace_oracle_agrees,
    DEFAULT_SEED,
};
use kvdepth::Q;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const CAP: usize = DEFAULT_WEIGHT_CAP;
const N_MAX: usize = 30;
const Q_ORDERS: [u32; 6] = [2, 3, 4, 6, 8, 12];
const COCYCLE_PAIRS: usize = 50;

type Outcome = Result<String, String>;

struct Criterion {
    id: u32,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_dimension_theorem() -> Outcome {
    let dims: Vec<(usize, usize)> = (0..=N_MAX)
        .into_par_iter()
        .map(|n| {
            (
                n,
                kernel_dim(n, 1).map(|k| k.dimension).unwrap_or(usize::MAX),
            )
        })
        .collect();
    let bad: Vec<_> = dims
        .iter()
        .filter(|(n, d)| *d != expected_kernel_dim(*n, 1))
        .collect();
    ensure(bad.is_empty(), format!("n <= {N_MAX}, mismatches {bad:?}"))
}

fn c2_trivial_q_kernel() -> Outcome {
    let cells: Vec<(usize, u32)> = (0..=N_MAX)
        .flat_map(|n| Q_ORDERS.iter().map(move |&l| (n, l)))
        .filter(|&(n, l)| (n + 2) % l as usize == 0)
        .collect();
    let bad: Vec<(usize, u32)> = cells
        .par_iter()
        .filter(|&&(n, l)| kernel_dim(n, l).map(|k| k.dimension) != Ok(0))
        .copied()
        .collect();
    ensure(
        bad.is_empty(),
        format!("{} cells, nonzero {bad:?}", cells.len()),
    )
}

fn c3_three_way() -> Outcome {
    let bad: Vec<usize> = (0..=N_MAX)
        .into_par_iter()
        .filter(|&n| {
            let k = kernel_dim(n, 1).map(|k| k.dimension);
            let p = poly_space_dim(n, 1, System::Full).map(|p| p.dimension);
            let m = chi13_multiplicity(n);
            !matches!((k, p, m), (Ok(k), Ok(p), Ok(m)) if k == p && m == k as i64)
        })
        .collect();
    ensure(
        bad.is_empty(),
        format!("n <= {N_MAX}, disagreements {bad:?}"),
    )
}

fn c4_appendix() -> Outcome {
    let chars_ok = (0..=40).all(|n| d12_characters(n).is_ok_and(|c| c == character_closed_form(n)));
    let f = f_seq(100);
    let pattern = [1i64, 1, 0, -1, -1, 0];
    let recursion = (2..=100).all(|n| f[n] == &f[n - 1] - &f[n - 2]);
    let period = (0..=100).all(|n| f[n] == pattern[n % 6].into());
    ensure(
        chars_ok && recursion && period,
        format!("characters n <= 40: {chars_ok}, recursion: {recursion}, period 6: {period}"),
    )
}

fn c5_golden_bracket() -> Outcome {
    let c = golden_bracket_check().map_err(|e| e.to_string())?;
    ensure(c.passed, format!("{}", c.data))
}

fn c6_cocycles() -> Outcome {
    let mut summary = Vec::new();
    let mut ok = true;
    for (l, weights) in [
        (1u32, vec![1usize, 2, 3, 4, 5, 6]),
        (2, vec![2, 4, 6]),
        (3, vec![3, 6]),
    ] {
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ u64::from(l));
        let pairs: Vec<(TDer, TDer)> = (0..COCYCLE_PAIRS)
            .map(|_| {
                (
                    random_tder(&mut rng, &weights),
                    random_tder(&mut rng, &weights),
                )
            })
            .collect();
        let failures = pairs
            .par_iter()
            .filter(|(u, v)| !cocycle_defect(u, v, l).is_ok_and(|d| d.is_zero()))
            .count();
        ok &= failures == 0;
        summary.push(format!("l={l}: {failures}/{COCYCLE_PAIRS} failures"));
    }
    ensure(ok, summary.join(", "))
}

fn bracket35() -> Result<LieElem, String> {
    ihara(
        &soule(3).map_err(|e| e.to_string())?,
        &soule(5).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())
}

fn c7_divergence_contrast() -> Outcome {
    let u = nu(&bracket35()?).map_err(|e| e.to_string())?;
    let d = div(&u).map_err(|e| e.to_string())?;
    let mut parts = vec![format!("div zero: {}", d.is_zero())];
    let mut ok = d.is_zero();
    for l in [2u32, 4, 8] {
        let q = qdiv(&u, l).map_err(|e| e.to_string())?;
        ok &= !q.is_zero();
        parts.push(format!("qdiv l={l} nonzero: {}", !q.is_zero()));
    }
    ensure(ok, parts.join(", "))
}

fn c8_grt() -> Outcome {
    let s3 = soule(3).map_err(|e| e.to_string())?;
    let s5 = soule(5).map_err(|e| e.to_string())?;
    let c3 = grt_check(&s3, CAP).map_err(|e| e.to_string())?;
    let c5 = grt_check(&s5, CAP).map_err(|e| e.to_string())?;
    let expected = [(2usize, 0usize), (3, 1), (4, 0), (5, 1), (7, 1)];
    let mut dims = Vec::new();
    let mut ok = c3.passes() && c5.passes();
    for (m, e) in expected {
        let sol = grt_solve(m, CAP).map_err(|e| e.to_string())?;
        ok &= sol.dimension() == e;
        if m == 3 {
            ok &= sol.basis.first().is_some_and(|b| proportional(b, &s3));
        }
        if m == 5 {
            ok &= sol.basis.first().is_some_and(|b| proportional(b, &s5));
        }
        dims.push(sol.dimension());
    }
    ensure(
        ok,
        format!(
            "sigma3 {:?}, sigma5 {:?}, dims at (2,3,4,5,7) = {dims:?}",
            c3, c5
        ),
    )
}

fn c9_krv() -> Outcome {
    let swap = TDer::new(vec![LieElem::y(), LieElem::x()]).map_err(|e| e.to_string())?;
    let r = krv_check(&swap, 8).map_err(|e| e.to_string())?;
    let zero = Q::from_integer(0.into());
    let mut ok = r.passes() && (1..=8).all(|m| r.coefficient(m).is_none_or(|c| c == zero));
    let mut parts = vec![format!("swap: {}", r.passes())];
    let elements = [
        ("nu(s3)", soule(3).map_err(|e| e.to_string())?),
        ("nu(s5)", soule(5).map_err(|e| e.to_string())?),
        ("nu({s3,s5})", bracket35()?),
    ];
    for (name, psi) in elements {
        let rep = krv_check(&nu(&psi).map_err(|e| e.to_string())?, 8).map_err(|e| e.to_string())?;
        ok &= rep.passes();
        parts.push(format!("{name}: {}", rep.passes()));
    }
    ensure(ok, parts.join(", "))
}

fn c10_stretch() -> Outcome {
    let span = soule_depth2_span(12, CAP).map_err(|e| e.to_string())?;
    let ok = span.rank == 1
        && span.expected_rank == 1
        && span.relation_count() == 1
        && span.expected_relations == 1;
    ensure(
        ok,
        format!(
            "{} brackets, rank {}, relations {}",
            span.brackets.len(),
            span.rank,
            span.relation_count()
        ),
    )
}

fn c11_trace_oracle() -> Outcome {
    let cells: Vec<(usize, usize, u32)> = [1u32, 2, 3]
        .iter()
        .flat_map(|&l| {
            [(2usize, 6usize), (3, 4)]
                .into_iter()
                .flat_map(move |(n, top)| (1..=top).map(move |m| (n, m, l)))
        })
        .filter(|&(_, m, l)| m % l as usize == 0)
        .collect();
    let bad: Vec<_> = cells
        .par_iter()
        .filter(|&&(n, m, l)| !trace_oracle_agrees(n, m, l).is_ok_and(|(ok, _)| ok))
        .copied()
        .collect();
    ensure(
        bad.is_empty(),
        format!("{} cells, disagreements {bad:?}", cells.len()),
    )
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "depth-2 kernel dimensions",
            budget: secs(60),
            run: c1_dimension_theorem,
        },
        Criterion {
            id: 2,
            title: "trivial q-kernel",
            budget: secs(120),
            run: c2_trivial_q_kernel,
        },
        Criterion {
            id: 3,
            title: "kernel / functional equations / character agreement",
            budget: secs(120),
            run: c3_three_way,
        },
        Criterion {
            id: 4,
            title: "dihedral characters and f_n",
            budget: secs(10),
            run: c4_appendix,
        },
        Criterion {
            id: 5,
            title: "golden bracket {s3, s5} in depth 2",
            budget: secs(60),
            run: c5_golden_bracket,
        },
        Criterion {
            id: 6,
            title: "div, sdiv, qdiv cocycle identities",
            budget: secs(60),
            run: c6_cocycles,
        },
        Criterion {
            id: 7,
            title: "divergence kernel contrast",
            budget: secs(60),
            run: c7_divergence_contrast,
        },
        Criterion {
            id: 8,
            title: "grt membership and solver dimensions",
            budget: secs(300),
            run: c8_grt,
        },
        Criterion {
            id: 9,
            title: "krv membership",
            budget: secs(60),
            run: c9_krv,
        },
        Criterion {
            id: 10,
            title: "depth-2 span of Soule brackets in weight 12",
            budget: secs(1800),
            run: c10_stretch,
        },
        Criterion {
            id: 11,
            title: "trace quotient oracle equivalence",
            budget: secs(60),
            run: c11_trace_oracle,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_budget = elapsed <= c.budget;
        let (pass, detail) = match outcome {
            Ok(d) => (in_budget, d),
            Err(d) => (false, d),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {} [{:.2}s / {}s] {}{}",
            if pass { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            elapsed.as_secs_f64(),
            c.budget.as_secs(),
            detail,
            if in_budget { "" } else { " (over budget)" }
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
