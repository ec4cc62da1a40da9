//! JSON and text rendering of results. Exact values are strings.

use serde_json::{json, Map, Value};
use siegel_core::basis::{mask_to_columns, BasisReport};
use siegel_core::bounds::{compare_regimes, BoundTable};
use siegel_core::checks::Check;
use siegel_core::relative::RelativeReport;
use siegel_core::selftest::SuiteResult;
use siegel_core::sensing::{IntMatrix, ManyBasesResult, SensingMatrix, SensingMethod};
use siegel_core::{ExactHeight, IndexSet, QMatrix};

pub fn height(h: &ExactHeight) -> Value {
    json!({
        "exponent": h.exponent(),
        "value": siegel_core::field::fmt_rational(h.value()),
        "approx": h.approx(),
    })
}

pub fn heights(hs: &[ExactHeight]) -> Value {
    Value::Array(hs.iter().map(height).collect())
}

pub fn matrix(m: &QMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array((0..m.cols()).map(|c| json!(m.get(r, c))).collect()))
            .collect(),
    )
}

pub fn mask_label(mask: u64) -> String {
    let cols: Vec<usize> = mask_to_columns(mask);
    IndexSet::new(cols).expect("distinct bits").to_string()
}

pub fn basis(rep: &BasisReport) -> Value {
    let mut subsets = Map::new();
    for (&mask, h) in &rep.subset_heights {
        subsets.insert(mask_label(mask), height(h));
    }
    let witnesses: Vec<Value> = rep
        .equality_witnesses
        .iter()
        .map(|w| {
            json!({
                "smaller": mask_label(w.smaller),
                "larger": mask_label(w.larger),
                "standard_columns": w.standard_columns.iter().map(|c| c + 1).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "field": rep.basis.ctx().to_string(),
        "rows": rep.ambient(),
        "cols": rep.dim(),
        "pivot_set": rep.pivot_set.one_based(),
        "basis": matrix(&rep.basis),
        "column_heights": heights(&rep.column_heights),
        "column_sparsity": rep.column_sparsity,
        "subspace_height": height(&rep.subspace_height),
        "subset_heights": subsets,
        "partial": rep.partial,
        "equality_witnesses": witnesses,
        "verdicts": {
            "pivot_rows_identity": rep.pivot_rows_are_identity(),
            "sparsity": rep.sparsity_holds(),
            "column_heights_bounded": rep.column_heights_bounded(),
            "subsets_bounded": rep.subsets_bounded(),
            "monotonicity": rep.monotonicity_verified,
            "equality_characterization": siegel_core::basis::check_equality_characterization(rep),
            "all": rep.all_assertions_hold(),
        },
    })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "NO"
    }
}

pub fn basis_text(rep: &BasisReport) -> String {
    let mut out = String::new();
    out += &format!("field {}, N = {}, L = {}\n", rep.basis.ctx(), rep.ambient(), rep.dim());
    out += &format!("pivot set J = {}\n", rep.pivot_set);
    out += &format!("X = {}\n", rep.basis);
    out += &format!("H(Z): {}\n", rep.subspace_height);
    for (i, (h, s)) in rep.column_heights.iter().zip(&rep.column_sparsity).enumerate() {
        out += &format!("column {}: {}, {} nonzero\n", i + 1, h, s);
    }
    out += &format!(
        "subset heights ({}{}):\n",
        rep.subset_heights.len(),
        if rep.partial { ", partial" } else { "" }
    );
    for (&mask, h) in &rep.subset_heights {
        out += &format!("  {:<12} {}\n", mask_label(mask), h);
    }
    out += &format!("equal pairs: {}\n", rep.equality_witnesses.len());
    out += &format!("pivot rows identity: {}\n", yes(rep.pivot_rows_are_identity()));
    out += &format!("sparsity <= N-L+1: {}\n", yes(rep.sparsity_holds()));
    out += &format!("column heights <= H(Z): {}\n", yes(rep.column_heights_bounded()));
    out += &format!("monotone along inclusion: {}\n", yes(rep.monotonicity_verified));
    out += &format!(
        "equality characterization: {}\n",
        yes(siegel_core::basis::check_equality_characterization(rep))
    );
    out
}

pub fn checks(list: &[Check]) -> Value {
    Value::Array(
        list.iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "cases": c.cases, "detail": c.detail}))
            .collect(),
    )
}

pub fn checks_text(list: &[Check]) -> String {
    list.iter()
        .map(|c| {
            format!(
                "{} {:<26} {:>5} cases  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.cases,
                c.detail
            )
        })
        .collect()
}

pub fn relative(rep: &RelativeReport) -> Value {
    let inst = &rep.instance;
    json!({
        "field": inst.ctx.to_string(),
        "matrix": matrix(&inst.matrix),
        "expanded": matrix(&inst.expanded),
        "kernel": matrix(&inst.kernel),
        "kernel_dim": inst.dim,
        "kernel_height": height(&rep.kernel_height),
        "stacked_height": height(&rep.stacked_height),
        "row_heights": heights(&rep.row_heights),
        "bound": height(&rep.bound_product),
        "basis": basis(&rep.basis),
        "verdicts": {
            "heights_equal": rep.heights_equal,
            "kernel_within_bound": rep.kernel_within_bound,
            "subsets_within_bound": rep.subsets_within_bound,
            "all": rep.all_assertions_hold(),
        },
    })
}

pub fn relative_text(rep: &RelativeReport) -> String {
    let inst = &rep.instance;
    let mut out = String::new();
    out += &format!("field {}, M = {}, N = {}\n", inst.ctx, inst.matrix.rows(), inst.matrix.cols());
    out += &format!("A' = {}\n", inst.expanded);
    out += &format!("rational kernel (dim {}) = {}\n", inst.dim, inst.kernel);
    out += &format!("H(Z): {}\n", rep.kernel_height);
    out += &format!("H of [A; conj A]: {}\n", rep.stacked_height);
    for (i, h) in rep.row_heights.iter().enumerate() {
        out += &format!("H(A_{}): {}\n", i + 1, h);
    }
    out += &format!("bound prod H(A_m)^2: {}\n", rep.bound_product);
    out += &format!("sparse basis X = {}\n", rep.basis.basis);
    out += &format!("heights equal: {}\n", yes(rep.heights_equal));
    out += &format!("H(Z) <= bound: {}\n", yes(rep.kernel_within_bound));
    out += &format!("subset heights <= bound: {}\n", yes(rep.subsets_within_bound));
    out += &format!("sparse basis conclusions: {}\n", yes(rep.basis.all_assertions_hold()));
    out
}

fn method_name(m: SensingMethod) -> &'static str {
    match m {
        SensingMethod::Vandermonde => "vandermonde",
        SensingMethod::Search => "search",
        SensingMethod::UserProvided => "file",
    }
}

pub fn sensing(s: &SensingMatrix) -> Value {
    json!({
        "rows": s.rows(),
        "cols": s.cols(),
        "matrix": int_matrix(&s.matrix),
        "sup_norm": s.sup_norm,
        "sparsity": s.sparsity,
        "verified": s.verified,
        "method": method_name(s.method),
        "seed": s.seed,
        "trial": s.trial,
    })
}

pub fn sensing_text(s: &SensingMatrix) -> String {
    let mut out = format!("{}x{} via {}, T = {}\n", s.rows(), s.cols(), method_name(s.method), s.sup_norm);
    if let (Some(seed), Some(trial)) = (s.seed, s.trial) {
        out += &format!("seed {}, accepted trial {}\n", seed, trial);
    }
    out += &format!("every {} columns independent: {}\n", s.sparsity, if s.verified { "verified" } else { "NO" });
    out
}

pub fn many_bases(res: &ManyBasesResult) -> Value {
    json!({
        "field": res.vectors.ctx().to_string(),
        "basis": matrix(&res.basis.basis),
        "subspace_height": height(&res.basis.subspace_height),
        "sensing": sensing(&res.sensing),
        "vectors": matrix(&res.vectors),
        "heights": heights(&res.heights),
        "bound": height(&res.bound),
        "product_bound": height(&res.product_bound),
        "subsets_checked": res.subsets_checked.to_string(),
        "sampled": res.sampled,
        "verdicts": {
            "all_subsets_are_bases": res.all_subsets_are_bases,
            "within_bound": res.within_bound,
            "within_product_bound": res.within_product_bound,
            "sup_norm_in_small_regime": res.sup_norm_in_small_regime,
            "all": res.all_assertions_hold(),
        },
    })
}

pub fn many_bases_text(res: &ManyBasesResult) -> String {
    let mut out = String::new();
    out += &format!("W = {}\n", res.basis.basis);
    out += &format!("H(Z): {}\n", res.basis.subspace_height);
    out += &sensing_text(&res.sensing);
    out += &format!("A = {}\n", res.sensing.matrix);
    out += &format!("y = W A = {}\n", res.vectors);
    for (i, h) in res.heights.iter().enumerate() {
        out += &format!(
            "y_{}: {}  within bound: {}\n",
            i + 1,
            h,
            yes(res.within_bound[i] && res.within_product_bound[i])
        );
    }
    out += &format!("bound L^(3/2) T H(Z)^L: {}\n", res.bound);
    out += &format!("bound L^(3/2) T prod H(w_j): {}\n", res.product_bound);
    out += &format!(
        "{} subsets checked{}: every L of them a basis: {}\n",
        res.subsets_checked,
        if res.sampled { " (sampled)" } else { "" },
        yes(res.all_subsets_are_bases)
    );
    out += &format!("T^L <= (2M)^(L-1): {}\n", yes(res.sup_norm_in_small_regime));
    out
}

pub fn bounds(t: &BoundTable) -> Value {
    let cmp = compare_regimes(t);
    let order = |v: &[(siegel_core::bounds::Regime, f64)]| -> Vec<&'static str> { v.iter().map(|(r, _)| r.key()).collect() };
    json!({
        "field": t.ctx.to_string(),
        "n": t.n,
        "l": t.l,
        "epsilon_approx": t.epsilon,
        "h_z_approx": t.h_z,
        "bv_approx": t.bv,
        "rt_approx": t.rt,
        "ckl_approx": t.ckl,
        "gamma_bound_max_approx": t.gamma_bound_max,
        "sparse_bound_max_approx": t.sparse_bound_max,
        "order_by_max_height": order(&cmp.by_max_height),
        "order_by_product": order(&cmp.by_product),
        "smallest_max_height": cmp.smallest_max_height().key(),
    })
}

pub fn bounds_text(t: &BoundTable) -> String {
    let cmp = compare_regimes(t);
    let names: Vec<&str> = cmp.by_max_height.iter().map(|(r, _)| r.label()).collect();
    format!("{}\nsmallest max-height guarantee: {}\norder: {}\n", t, cmp.smallest_max_height().label(), names.join(" < "))
}

pub fn suites(results: &[SuiteResult]) -> Value {
    Value::Array(
        results
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "passed": r.passed(),
                    "cases": r.cases,
                    "failures": r.failures,
                    "first_failure": r.first_failure,
                })
            })
            .collect(),
    )
}
