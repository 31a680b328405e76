//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use cherednik_core::banach::{
    analytic_verma_slice, banach_multiply, choose_levels, coadmissible_check, gauss_norm, lattice_check,
    weight_decompose_banach, BanachError,
};
use cherednik_core::category_o::{
    decomposition_matrix, dunkl_action, highest_weight_order, singular_vectors, verma_action, weight_spaces,
};
use cherednik_core::poly::{count_monomials, monomials_of_degree};
use cherednik_core::{
    BanachElement, CherednikAlgebra, LevelParams, Matrix, ModuleVector, Mono, PadicContext, PbwElement, PbwKey, Scalar,
    Valuation, VermaSlice,
};
use common::{algebra, algebra_per_class, random_element, random_module_vector, random_padic, ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rational_coeff(r: &mut dyn rand::RngCore) -> Scalar {
    Scalar::from_ratio(r.gen_range(-5..=5), r.gen_range(1..=3))
}

fn padic_coeff(r: &mut dyn rand::RngCore) -> Scalar {
    let mut r = r;
    random_padic(&mut r, 5)
}

fn confluence() -> Outcome {
    let mut rng = rng(1);
    let mut total = 0;
    for (spec, c) in [("cyclic:2", ratio(1, 2)), ("S3", ratio(1, 3))] {
        let alg = algebra(spec, c);
        for k in 0..200 {
            let gen = |rng: &mut ChaCha8Rng| {
                let deg = rng.gen_range(0..=4);
                random_element(rng, &alg, deg, 2, &mut rational_coeff)
            };
            let (a, b, c) = (gen(&mut rng), gen(&mut rng), gen(&mut rng));
            let left = alg.multiply(&alg.multiply(&a, &b).unwrap(), &c).unwrap();
            let right = alg.multiply(&a, &alg.multiply(&b, &c).unwrap()).unwrap();
            ensure(left == right, || format!("{spec}: triple {k} is not associative: a = {a}, b = {b}, c = {c}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} triples"))
}

fn inner_grading() -> Outcome {
    let mut total = 0;
    for (spec, c) in [("cyclic:2", ratio(1, 2)), ("S3", ratio(1, 3))] {
        let alg = algebra(spec, c);
        let n = alg.dim();
        for deg in 0..=5u32 {
            for dx in 0..=deg {
                for x in monomials_of_degree(n, dx) {
                    for y in monomials_of_degree(n, deg - dx) {
                        for g in 0..alg.order() {
                            let key = PbwKey { x: x.clone(), g, y: y.clone() };
                            let grade = key.grade();
                            let mono = PbwElement::monomial(key, Scalar::one());
                            let got = alg.ad_euler(&mono).unwrap();
                            let want = mono.scale(&Scalar::from_int(grade));
                            ensure(got == want, || format!("{spec}: [∂, {mono}] = {got}, expected {want}"))?;
                            total += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{total} monomials"))
}

/// κ_s[i][j] = −2c(s)·(M_s − I)_{ji} / tr(M_s − I), from the raw group matrices.
fn kappa_from_matrices(alg: &CherednikAlgebra) -> Vec<(usize, Vec<Vec<Scalar>>)> {
    let rg = alg.reflection_group();
    let group = rg.group();
    let n = alg.dim();
    let mut out = Vec::new();
    for s in 0..group.order() {
        let d = group.element(s).sub(&Matrix::identity(n));
        if d.rank() != 1 {
            continue;
        }
        let c = alg.c().value_for_class(group.class_of(s));
        let scale = &(&Scalar::from_int(-2) * c) / &d.trace();
        let k = (0..n).map(|i| (0..n).map(|j| &d[(j, i)] * &scale).collect()).collect();
        out.push((s, k));
    }
    out
}

fn add_scaled(acc: &mut [Scalar], v: &[Scalar], c: &Scalar) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a += &(b * c);
    }
}

fn relations_on(slice: &VermaSlice) -> Result<usize, String> {
    let alg = slice.algebra().clone();
    let group = alg.reflection_group().group();
    let n = alg.dim();
    let kappa = kappa_from_matrices(&alg);
    let label = slice.irrep().label().to_string();
    let mut checked = 0;
    for d in 0..=slice.cutoff() {
        let dim = slice.ambient_dim(d);
        let top = d == slice.cutoff();
        for b in 0..dim {
            let mut v = vec![Scalar::zero(); dim];
            v[b] = Scalar::one();
            let ctx = || format!("{}: Δ({label}) degree {d} basis {b}", group.order());
            let x: Vec<Vec<Scalar>> = if top {
                Vec::new()
            } else {
                (0..n).map(|j| slice.apply_x(j, d, &v).unwrap()).collect()
            };
            let y: Vec<Vec<Scalar>> = if d == 0 {
                Vec::new()
            } else {
                (0..n).map(|i| slice.apply_y(i, d, &v)).collect()
            };
            // [x_i, x_j] = 0 and [y_i, y_j] = 0
            for i in 0..n {
                for j in 0..i {
                    if d + 2 <= slice.cutoff() {
                        let a = slice.apply_x(i, d + 1, &x[j]).unwrap();
                        let b2 = slice.apply_x(j, d + 1, &x[i]).unwrap();
                        ensure(a == b2, || format!("{}: x{} x{} ≠ x{} x{}", ctx(), i + 1, j + 1, j + 1, i + 1))?;
                    }
                    if d >= 2 {
                        let a = slice.apply_y(i, d - 1, &y[j]);
                        let b2 = slice.apply_y(j, d - 1, &y[i]);
                        ensure(a == b2, || format!("{}: y{} y{} ≠ y{} y{}", ctx(), i + 1, j + 1, j + 1, i + 1))?;
                    }
                    checked += 2;
                }
            }
            // y_i x_j − x_j y_i = δ_ij + Σ_s κ_s[i][j] s
            if !top {
                for i in 0..n {
                    for j in 0..n {
                        let mut lhs = slice.apply_y(i, d + 1, &x[j]);
                        if d > 0 {
                            let xy = slice.apply_x(j, d - 1, &y[i]).unwrap();
                            add_scaled(&mut lhs, &xy, &Scalar::from_int(-1));
                        }
                        let mut rhs = if i == j { v.clone() } else { vec![Scalar::zero(); dim] };
                        for (s, k) in &kappa {
                            if !k[i][j].is_zero() {
                                add_scaled(&mut rhs, &slice.apply_group(*s, d, &v), &k[i][j]);
                            }
                        }
                        ensure(lhs == rhs, || format!("{}: [y{}, x{}] relation fails", ctx(), i + 1, j + 1))?;
                        checked += 1;
                    }
                }
            }
            for g in 0..group.order() {
                let m = group.element(g);
                let a = m.inverse().unwrap().transpose();
                let gv = slice.apply_group(g, d, &v);
                // g x_j g⁻¹ = Σ_i A_{ij} x_i and g y_j g⁻¹ = Σ_i M_{ij} y_i
                for j in 0..n {
                    if !top {
                        let lhs = slice.apply_group(g, d + 1, &x[j]);
                        let mut rhs = vec![Scalar::zero(); slice.ambient_dim(d + 1)];
                        for i in 0..n {
                            add_scaled(&mut rhs, &slice.apply_x(i, d, &gv).unwrap(), &a[(i, j)]);
                        }
                        ensure(lhs == rhs, || format!("{}: g{g} x{} g⁻¹ relation fails", ctx(), j + 1))?;
                    }
                    if d > 0 {
                        let lhs = slice.apply_group(g, d - 1, &y[j]);
                        let mut rhs = vec![Scalar::zero(); slice.ambient_dim(d - 1)];
                        for i in 0..n {
                            add_scaled(&mut rhs, &slice.apply_y(i, d, &gv), &m[(i, j)]);
                        }
                        ensure(lhs == rhs, || format!("{}: g{g} y{} g⁻¹ relation fails", ctx(), j + 1))?;
                    }
                    checked += 2;
                }
                // group law
                for h in 0..group.order() {
                    let lhs = slice.apply_group(h, d, &gv);
                    let rhs = slice.apply_group(group.mul(h, g), d, &v);
                    ensure(lhs == rhs, || format!("{}: g{h}·(g{g}·v) ≠ (g{h} g{g})·v", ctx()))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn relation_vanishing() -> Outcome {
    let mut total = 0;
    let mut algs = Vec::new();
    for l in 1..=4 {
        algs.push(algebra_per_class(&format!("cyclic:{l}")));
    }
    algs.push(algebra("S3", ratio(1, 3)));
    for alg in algs {
        for w in 0..alg.reflection_group().irreps().len() {
            let slice = VermaSlice::new(alg.clone(), w, 20).map_err(|e| e.to_string())?;
            total += relations_on(&slice)?;
        }
    }
    Ok(format!("{total} relation instances"))
}

fn dunkl_oracle() -> Outcome {
    let mut rng = rng(4);
    let algs = [
        algebra("cyclic:2", ratio(1, 2)),
        algebra_per_class("cyclic:3"),
        algebra_per_class("cyclic:4"),
        algebra("S3", ratio(1, 3)),
        algebra_per_class("dihedral:4"),
    ];
    let mut instances = 0;
    for alg in algs {
        let n = alg.dim();
        for w in 0..alg.reflection_group().irreps().len() {
            let slice = VermaSlice::new(alg.clone(), w, 8).map_err(|e| e.to_string())?;
            for k in 0..100 {
                let u = random_module_vector(&mut rng, &slice, 8);
                for i in 0..n {
                    let via_pbw = verma_action(&slice, &PbwElement::y(n, i), &u).map_err(|e| e.to_string())?;
                    let mut e = vec![Scalar::zero(); n];
                    e[i] = Scalar::one();
                    let via_dunkl = dunkl_action(&slice, &e, &u);
                    ensure(normalize(&via_pbw) == normalize(&via_dunkl), || {
                        format!(
                            "{}: Δ({}) vector {k}: y{} disagrees with the Dunkl operator",
                            alg.reflection_group().name(),
                            slice.irrep().label(),
                            i + 1
                        )
                    })?;
                }
            }
            instances += 1;
        }
    }
    Ok(format!("{instances} (W, c) instances × 100 vectors"))
}

/// Drops zero parts so representations of the same vector compare equal.
fn normalize(v: &ModuleVector) -> Vec<(u32, Vec<Scalar>)> {
    v.parts()
        .iter()
        .filter(|(_, p)| p.iter().any(|x| !x.is_zero()))
        .map(|(d, p)| (*d, p.clone()))
        .collect()
}

fn singular_law() -> Outcome {
    for n in [1i64, 3, 5] {
        let alg = algebra("cyclic:2", ratio(n, 2));
        let slice = VermaSlice::for_label(alg, "triv", 20).map_err(|e| e.to_string())?;
        for d in 1..=20u32 {
            let dim = singular_vectors(&slice, d).dim();
            let want = usize::from(d as i64 == n);
            ensure(dim == want, || format!("c = {n}/2: singular space of degree {d} has dim {dim}, expected {want}"))?;
        }
    }
    for c in [ratio(1, 3), ratio(2, 5)] {
        let alg = algebra("cyclic:2", c.clone());
        for w in ["triv", "sgn"] {
            let slice = VermaSlice::for_label(alg.clone(), w, 20).map_err(|e| e.to_string())?;
            for d in 1..=20u32 {
                let dim = singular_vectors(&slice, d).dim();
                ensure(dim == 0, || format!("c = {c}: Δ({w}) has singular vectors in degree {d}"))?;
            }
        }
    }
    Ok("c = 1/2, 3/2, 5/2 at degree n only; none for c = 1/3, 2/5".into())
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn weight_dimensions() -> Outcome {
    let mut specs: Vec<String> = (1..=12).map(|l| format!("cyclic:{l}")).collect();
    specs.extend((2..=8).map(|l| format!("dihedral:{l}")));
    specs.push("S3".into());
    specs.push("S4".into());
    let mut pairs = 0;
    for spec in &specs {
        let alg = algebra(spec, ratio(1, 3));
        let d = alg.dim() as u64;
        for w in 0..alg.reflection_group().irreps().len() {
            let slice = VermaSlice::new(alg.clone(), w, 15).map_err(|e| e.to_string())?;
            let dim_w = slice.irrep().dim() as u64;
            for (k, (weight, kernel, scalar)) in weight_spaces(&slice).into_iter().enumerate() {
                let want = binomial(k as u64 + d - 1, d - 1) * dim_w;
                let expected_weight = slice.c_w() + &Scalar::from_int(k as i64);
                ensure(kernel as u64 == want && scalar && weight == expected_weight, || {
                    format!(
                        "{spec} Δ({}): degree {k} has weight-space dim {kernel}, expected {want} (semisimple: {scalar})",
                        slice.irrep().label()
                    )
                })?;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} (G, W) pairs, n ≤ 15"))
}

fn decomposition() -> Outcome {
    let cases = [
        (ratio(1, 2), vec![vec![1, 1], vec![0, 1]]),
        (ratio(1, 3), vec![vec![1, 0], vec![0, 1]]),
    ];
    for (c, want) in cases {
        let alg = algebra("cyclic:2", c.clone());
        let dm = decomposition_matrix(alg.clone(), 12).map_err(|e| e.to_string())?;
        ensure(dm.labels == ["triv", "sgn"], || format!("unexpected label order {:?}", dm.labels))?;
        ensure(dm.entries == want, || format!("c = {c}: matrix {:?}, expected {want:?}", dm.entries))?;
        let order = highest_weight_order(&alg).map_err(|e| e.to_string())?;
        for (w, row) in dm.entries.iter().enumerate() {
            for (e, &m) in row.iter().enumerate() {
                let ok = if w == e { m == 1 } else { m == 0 || order.contains(&(w, e)) };
                ensure(ok, || format!("c = {c}: entry ({w}, {e}) = {m} breaks unitriangularity"))?;
            }
        }
    }
    Ok("ℤ/2 at c = 1/2 and c = 1/3".into())
}

fn ctx5() -> PadicContext {
    PadicContext::new(5, 40, 1).unwrap()
}

fn random_banach(rng: &mut ChaCha8Rng, alg: &CherednikAlgebra, params: &LevelParams) -> BanachElement {
    loop {
        let deg = rng.gen_range(0..=3);
        let e = random_element(rng, alg, deg, 3, &mut padic_coeff);
        let x = BanachElement::new(e, params.clone(), params.ctx().precision() as i64);
        if gauss_norm(&x).is_ok() {
            return x;
        }
    }
}

fn submultiplicativity() -> Outcome {
    let mut rng = rng(8);
    let alg = algebra("cyclic:2", ratio(1, 2));
    let levels = choose_levels(&alg, &ctx5(), 3);
    for params in &levels {
        for k in 0..500 {
            let a = random_banach(&mut rng, &alg, params);
            let b = random_banach(&mut rng, &alg, params);
            let ea = gauss_norm(&a).unwrap();
            let eb = gauss_norm(&b).unwrap();
            let bound = ea.add(eb);
            let ab = banach_multiply(&alg, &a, &b).map_err(|e| e.to_string())?;
            let got = match gauss_norm(&ab) {
                Ok(v) => v,
                Err(BanachError::TailDominated { tau }) => Valuation::exact(tau),
                Err(e) => return Err(e.to_string()),
            };
            ensure(got.cmp_value(&bound) != Ordering::Less, || {
                format!("level {}: pair {k}: |ab| exponent {got} < {bound}", params.m())
            })?;
        }
    }
    let rs: Vec<String> = levels.iter().map(|p| format!("r({}) = {}", p.m(), p.r())).collect();
    Ok(format!("1500 pairs, {}", rs.join(", ")))
}

fn component_bound() -> Outcome {
    let mut rng = rng(9);
    let algs = [algebra("cyclic:2", ratio(1, 2)), algebra("S3", ratio(1, 5))];
    let levels: Vec<Vec<LevelParams>> = algs.iter().map(|a| choose_levels(a, &ctx5(), 3)).collect();
    for k in 0..200 {
        let which = k % 2;
        let params = &levels[which][rng.gen_range(0..3)];
        let x = random_banach(&mut rng, &algs[which], params);
        let ex = gauss_norm(&x).unwrap();
        let dec = weight_decompose_banach(&x);
        for (w, comp) in &dec.components {
            let ec = gauss_norm(comp).map_err(|e| e.to_string())?;
            ensure(ec.cmp_value(&ex) != Ordering::Less, || {
                format!("element {k}: component of weight {w} has exponent {ec} < {ex}")
            })?;
        }
        let sum = dec.resum().ok_or("empty decomposition")?;
        ensure(sum.element() == x.element() && sum.tau() == x.tau(), || {
            format!("element {k}: components do not re-sum to the stored terms")
        })?;
    }
    Ok("200 elements".into())
}

fn lattice_soundness() -> Outcome {
    let ctx = ctx5();
    let mut summary = Vec::new();
    for c in [ratio(0, 1), ratio(1, 2), ratio(1, 5)] {
        let alg = algebra("cyclic:2", c.clone());
        for params in choose_levels(&alg, &ctx, 3) {
            let report = lattice_check(&alg, &params).map_err(|e| format!("c = {c}: {e}"))?;
            summary.push(format!("c={c},m={}:r={}", report.level, report.r));
        }
    }
    let under = [
        (ratio(1, 5), LevelParams::new(0, 0, ctx.clone())),
        (ratio(1, 25), LevelParams::new(0, 1, ctx.clone())),
    ];
    for (c, params) in under {
        let alg = algebra("cyclic:2", c.clone());
        match lattice_check(&alg, &params) {
            Err(BanachError::LatticeViolation { product, exponent, .. }) => {
                summary.push(format!("c={c},r={} fails at {product} ({exponent})", params.r()));
            }
            other => return Err(format!("c = {c}, r = {}: expected a located violation, got {other:?}", params.r())),
        }
    }
    Ok(summary.join("; "))
}

fn analytic_recovery() -> Outcome {
    let cases = [
        (algebra("cyclic:2", ratio(1, 2)), ctx5()),
        (algebra("S3", ratio(1, 3)), ctx5()),
        (algebra_per_class("cyclic:3"), PadicContext::new(7, 40, 3).unwrap()),
    ];
    let mut slices = 0;
    for (alg, ctx) in cases {
        for params in choose_levels(&alg, &ctx, 3) {
            for w in 0..alg.reflection_group().irreps().len() {
                let slice = VermaSlice::new(alg.clone(), w, 10).map_err(|e| e.to_string())?;
                let av = analytic_verma_slice(&slice, &params).map_err(|e| e.to_string())?;
                ensure(av.degrees.len() == 11, || "missing degrees".into())?;
                for nd in &av.degrees {
                    let count = count_monomials(alg.dim(), nd.degree) * slice.irrep().dim();
                    ensure(nd.dim == count && nd.dim == slice.dim(nd.degree), || {
                        format!("degree {}: weight space dim {} ≠ {count}", nd.degree, nd.dim)
                    })?;
                    ensure(nd.weight == slice.c_w() + &Scalar::from_int(nd.degree as i64), || {
                        format!("degree {}: wrong weight {}", nd.degree, nd.weight)
                    })?;
                }
                for g in &av.generators {
                    ensure(g.exponent.cmp_value(&Valuation::exact(0)) != Ordering::Less, || {
                        format!("level {}: {} has operator exponent {}", params.m(), g.generator, g.exponent)
                    })?;
                }
                slices += 1;
            }
        }
    }
    Ok(format!("{slices} normed slices"))
}

fn coadmissible() -> Outcome {
    let alg = algebra("cyclic:2", ratio(1, 2));
    let levels = choose_levels(&alg, &ctx5(), 5);
    let n = alg.dim();
    let poly = {
        let mut p = PbwElement::scalar(n, ratio(-1, 5));
        let x2 = Mono::from_exps(vec![2]);
        p.add_term(PbwKey { x: x2, g: 0, y: Mono::one(n) }, Scalar::from_int(3));
        p
    };
    let family = |e: &PbwElement| -> Vec<BanachElement> {
        levels
            .iter()
            .map(|p| BanachElement::with_default_tail(e.clone(), p.clone()))
            .collect()
    };
    coadmissible_check(&family(&poly)).map_err(|e| format!("constant family: {e}"))?;
    coadmissible_check(&family(&alg.euler_element())).map_err(|e| format!("∂ family: {e}"))?;
    for perturbed in 1..5usize {
        let mut fam = family(&alg.euler_element());
        let p = &fam[perturbed];
        let bumped = p.element() + &PbwElement::x(n, 0);
        fam[perturbed] = BanachElement::new(bumped, p.params().clone(), p.tau());
        match coadmissible_check(&fam) {
            Err(BanachError::IncompatibleFamily { level }) if level as usize == perturbed => {}
            other => return Err(format!("perturbation at level {perturbed}: got {other:?}")),
        }
    }
    Ok("constant and ∂ families over levels 0..4; perturbations located at levels 1..4".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("straightening confluence", confluence),
        ("inner grading", inner_grading),
        ("relation-vanishing on modules", relation_vanishing),
        ("Dunkl oracle", dunkl_oracle),
        ("rank-1 singular law", singular_law),
        ("weight-space dimensions", weight_dimensions),
        ("decomposition matrix", decomposition),
        ("Gauss-norm submultiplicativity", submultiplicativity),
        ("weight-component norm bound", component_bound),
        ("lattice soundness", lattice_soundness),
        ("analytic Verma recovery", analytic_recovery),
        ("co-admissible compatibility", coadmissible),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({detail}) [{secs:.1}s]", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
