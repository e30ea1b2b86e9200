//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails. All comparisons are exact; the only tolerance is
//! the runtime budget of the three-way sweep.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use ppsym::count::{count, q_count, Method};
use ppsym::exactalg::{det, hafnian, permanent, pfaffian, ExactMatrix};
use ppsym::exec::Execution;
use ppsym::formulas::{cyclic_self_complementary_ratio, ratio_identities};
use ppsym::graph::PlanarMultigraph;
use ppsym::hexgrid::{build_graph, BoxDims, HexRegion};
use ppsym::kasteleyn::{
    bipartite_matrix, flat_orientation, flat_signing, skew_matrix, symmetric_matrix, unsigned_bipartite_matrix,
};
use ppsym::oracle::{count_matchings, count_matchings_removing, count_symmetric};
use ppsym::symmetry::{build_parity_gadget, build_quotient, BachelorMode, Parity, SymmetryClass};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SWEEP_BUDGET: Duration = Duration::from_secs(300);
const RANDOM_GRAPHS: usize = 50;
const MAX_SKEW_DIM: usize = 14;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn boxes(max_side: u32) -> impl Iterator<Item = BoxDims> {
    (0..=max_side).flat_map(move |a| (0..=max_side).flat_map(move |b| (0..=max_side).map(move |c| BoxDims { a, b, c })))
}

fn all_cells(max_side: u32) -> Vec<(SymmetryClass, BoxDims)> {
    SymmetryClass::all()
        .flat_map(|cls| boxes(max_side).filter(move |&d| cls.fixes_box(d)).map(move |d| (cls, d)))
        .collect()
}

fn int(m: &ExactMatrix<ppsym::exactalg::Poly>) -> ExactMatrix<BigInt> {
    m.eval(&BigInt::from(1))
}

fn three_way_agreement() -> Outcome {
    let start = Instant::now();
    let cells = all_cells(4);
    let n = cells.len();
    let bad: Vec<String> = Execution::default()
        .map(cells, |(cls, d)| {
            let vals: Vec<_> = [Method::Formula, Method::Matrix, Method::Oracle]
                .into_iter()
                .map(|m| count(cls, d, m).map_err(|e| e.to_string()))
                .collect();
            let ok = vals[0].is_ok() && vals.iter().all(|v| v == &vals[0]);
            (!ok).then(|| format!("class {} box {d}: {vals:?}", cls.id()))
        })
        .into_iter()
        .flatten()
        .collect();
    let elapsed = start.elapsed();
    if !bad.is_empty() {
        return Err(format!("{} of {n} cells disagree, first: {}", bad.len(), bad[0]));
    }
    if elapsed > SWEEP_BUDGET {
        return Err(format!("{n} cells agree but took {elapsed:.1?} (budget {SWEEP_BUDGET:?})"));
    }
    Ok(format!("{n} cells, classes 1..10, sides 0..=4, {elapsed:.1?}"))
}

fn specific_values() -> Outcome {
    let expected: [(u8, u32, u64); 7] = [(1, 1, 2), (1, 2, 20), (3, 2, 5), (5, 2, 4), (9, 2, 1), (9, 4, 4), (10, 2, 1)];
    for (i, side, want) in expected {
        let cls = SymmetryClass::new(i).unwrap();
        for m in [Method::Formula, Method::Matrix, Method::Oracle] {
            let got = count(cls, BoxDims::cube(side), m).map_err(|e| e.to_string())?;
            if got != BigInt::from(want) {
                return Err(format!("N{i}({side},{side},{side}) by {m} = {got}, expected {want}"));
            }
        }
    }
    Ok("7 values, each by formula, matrix and oracle".into())
}

fn det_equals_permanent() -> Outcome {
    let mut graphs: Vec<(String, PlanarMultigraph)> =
        boxes(3).map(|d| (format!("Z({d})"), build_graph(&HexRegion::new(d)))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    for k in 0..RANDOM_GRAPHS {
        graphs.push((format!("random #{k}"), common::random_planar_graph(&mut rng, false)));
    }
    let total = graphs.len();
    let bad: Vec<String> = Execution::default()
        .map(graphs, |(name, g)| -> Option<String> {
            let check = || -> ppsym::Result<(BigInt, BigInt)> {
                let perm = permanent(&int(&unsigned_bipartite_matrix(&g)?))?;
                let d = det(&int(&bipartite_matrix(&flat_signing(&g)?)?))?.abs();
                Ok((d, perm))
            };
            match check() {
                Ok((d, p)) if d == p => None,
                Ok((d, p)) => Some(format!("{name}: |det| {d} != perm {p}")),
                Err(e) => Some(format!("{name}: {e}")),
            }
        })
        .into_iter()
        .flatten()
        .collect();
    match bad.first() {
        Some(first) => Err(format!("{} of {total} graphs fail, first: {first}", bad.len())),
        None => Ok(format!("{total} graphs (Z with sides <= 3, {RANDOM_GRAPHS} random planar bipartite)")),
    }
}

fn skew_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let mut oriented = Vec::new();
    for _ in 0..RANDOM_GRAPHS {
        oriented.push(common::random_planar_graph(&mut rng, true));
    }
    for d in boxes(3) {
        let region = HexRegion::new(d);
        oriented.push(build_graph(&region));
        for cls in SymmetryClass::all().filter(|c| c.fixes_box(d)) {
            oriented.push(build_quotient(&region, cls, BachelorMode::Gadget).unwrap().graph);
        }
    }
    oriented.retain(|g| g.vertex_count() <= MAX_SKEW_DIM);
    let mut checked = 0;
    for g in &oriented {
        let skew = int(&skew_matrix(&flat_orientation(g).map_err(|e| e.to_string())?));
        let pf = pfaffian(&skew).map_err(|e| e.to_string())?;
        let hf = hafnian(&int(&symmetric_matrix(g))).map_err(|e| e.to_string())?;
        let dt = det(&skew).map_err(|e| e.to_string())?;
        if hf != pf.abs() || &pf * &pf != dt {
            return Err(format!("graph with {} vertices: Hf {hf}, Pf {pf}, Det {dt}", g.vertex_count()));
        }
        checked += 1;
    }
    let mut random = 0;
    for n in 0..=MAX_SKEW_DIM {
        for _ in 0..5 {
            let m = common::random_skew(&mut rng, n);
            let pf = pfaffian(&m).map_err(|e| e.to_string())?;
            let dt = det(&m).map_err(|e| e.to_string())?;
            if &pf * &pf != dt {
                return Err(format!("random {n}x{n}: Pf^2 {} != Det {dt}", &pf * &pf));
            }
            random += 1;
        }
    }
    Ok(format!("{checked} flat-oriented graphs (Hf = |Pf|, Pf^2 = Det), {random} random skew matrices (Pf^2 = Det)"))
}

fn q_determinant() -> Outcome {
    let mut n = 0;
    for d in boxes(3) {
        let qd = q_count(d, Method::Matrix).map_err(|e| e.to_string())?;
        let qs = q_count(d, Method::Oracle).map_err(|e| e.to_string())?;
        let plain = count(SymmetryClass::new(1).unwrap(), d, Method::Formula).unwrap();
        if qd != qs || qd.eval_one() != plain {
            return Err(format!("box {d}: q-det {qd}, q-sum {qs}, formula {plain}"));
        }
        n += 1;
    }
    Ok(format!("{n} boxes with sides <= 3"))
}

fn ratio_checks() -> Outcome {
    let mut n = 0;
    for a in 0..=6 {
        for b in 0..=6 {
            for c in 1..=6 {
                let checks = ratio_identities(a, b, c).map_err(|e| e.to_string())?;
                let chk = checks.iter().find(|r| r.identity == "unrestricted").unwrap();
                if !chk.holds {
                    return Err(format!("{chk:?}"));
                }
                n += 1;
            }
        }
    }
    for a in 0..=4 {
        for chk in ratio_identities(a, a, 1).map_err(|e| e.to_string())? {
            if matches!(chk.identity, "cyclic" | "cyclic_self_complementary") {
                if !chk.holds {
                    return Err(format!("{chk:?}"));
                }
                n += 1;
            }
        }
    }
    // Cyclic self-complementary steps from brute-force counts in cubes of side 2 and 4.
    let nine = SymmetryClass::new(9).unwrap();
    let o2 = count_symmetric(nine, BoxDims::cube(2));
    let o4 = count_symmetric(nine, BoxDims::cube(4));
    if BigRational::new(o2.clone(), 1.into()) != cyclic_self_complementary_ratio(0)
        || BigRational::new(o4, o2) != cyclic_self_complementary_ratio(1)
    {
        return Err("cyclic self-complementary step disagrees with oracle counts".into());
    }
    Ok(format!("{n} identity instances; cyclic self-complementary steps match the oracle at sides 2, 4"))
}

fn quotient_matching_counts() -> Outcome {
    let cells = all_cells(4);
    let n = cells.len();
    let bad: Vec<String> = Execution::default()
        .map(cells, |(cls, d)| {
            let region = HexRegion::new(d);
            let want = count_symmetric(cls, d);
            for mode in [BachelorMode::Keep, BachelorMode::Gadget] {
                let got = build_quotient(&region, cls, mode).and_then(|q| count_matchings(&q.graph));
                match got {
                    Ok(v) if v == want => {}
                    other => return Some(format!("class {} box {d} {mode:?}: {other:?}, oracle {want}", cls.id())),
                }
            }
            None
        })
        .into_iter()
        .flatten()
        .collect();
    match bad.first() {
        Some(first) => Err(format!("{} of {n} cells fail, first: {first}", bad.len())),
        None => Ok(format!("{n} cells, with and without the parity gadget")),
    }
}

fn gadget_contract() -> Outcome {
    let mut subsets = 0;
    for d in 1..=8usize {
        for parity in [Parity::Odd, Parity::Even] {
            let gadget = build_parity_gadget(d, parity);
            for mask in 0u32..(1 << d) {
                let removed: Vec<usize> =
                    (0..d).filter(|&i| mask >> i & 1 == 1).map(|i| gadget.attachments[i]).collect();
                let got = count_matchings_removing(&gadget.graph, &removed).map_err(|e| e.to_string())?;
                let want = u32::from(parity.matches(removed.len()));
                if got != BigInt::from(want) {
                    return Err(format!("d={d} {parity:?} removing {removed:?}: {got} matchings, expected {want}"));
                }
                subsets += 1;
            }
        }
    }
    Ok(format!("{subsets} attachment subsets, 1 to 8 attachment points, both parities"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("three-way agreement of formula, Kasteleyn and oracle", three_way_agreement),
        ("specific values", specific_values),
        ("|Det| of flat-signed matrix equals Ryser permanent", det_equals_permanent),
        ("Hf = |Pf| and Pf^2 = Det", skew_identities),
        ("normalized q-determinant equals q-sum", q_determinant),
        ("ratio identities", ratio_checks),
        ("quotient matching counts equal symmetric counts", quotient_matching_counts),
        ("parity gadget contract", gadget_contract),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail}) [{t:.1?}]", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({detail}) [{t:.1?}]", k + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
