//! WebAssembly entry points for the static demo page in `www/`.

use gridpaths::cli_io::{read_dimacs, read_representation, render_representation, RenderOptions};
use gridpaths::constructions::{build_end_eater, build_gv, build_separator};
use gridpaths::representation::{derive_graph, validate, Semantics};
use gridpaths::sat_reduction::{build_reduction_graph, layout_reduction};
use gridpaths::solvers::{sat_solve, SatResult, SearchBudget};
use wasm_bindgen::prelude::*;

fn options(unit_px: u32) -> RenderOptions {
    RenderOptions { unit_px: unit_px.max(4), ..RenderOptions::default() }
}

/// SVG of a generated gadget: `gk` (parameter k), `eater` (parameter i) or `gv`.
#[wasm_bindgen]
pub fn draw_gadget(kind: &str, param: u32, unit_px: u32) -> Result<String, JsError> {
    let bundle = match kind {
        "gk" => build_separator(param as usize),
        "eater" => u8::try_from(param).ok().and_then(build_end_eater).ok_or_else(|| JsError::new("i must be 1, 2 or 3"))?,
        "gv" => build_gv(),
        _ => return Err(JsError::new(&format!("unknown gadget `{kind}`"))),
    };
    Ok(render_representation(&bundle.rep, &options(unit_px)))
}

/// Validity and derived-graph summary of a representation file.
#[wasm_bindgen]
pub fn check_representation(json: &str) -> Result<String, JsError> {
    let rep = read_representation(json).map_err(|e| JsError::new(&e.to_string()))?;
    let report = validate(&rep);
    if !report.is_valid() {
        return Ok(format!("invalid: {} violation(s), first {:?}", report.violations.len(), report.violations[0]));
    }
    let g = derive_graph(&rep).map_err(|e| JsError::new(&e.to_string()))?;
    let sem = if rep.semantics == Semantics::Cpg { "CPG" } else { "EPG" };
    Ok(format!(
        "valid {sem}: {} paths, max {} bends, graph with {} edges",
        rep.paths.len(),
        rep.max_bends(),
        g.edge_count()
    ))
}

/// SVG of the bend-`i` reduction representation of a satisfiable DIMACS formula.
#[wasm_bindgen]
pub fn reduce_formula(dimacs: &str, i: u8, unit_px: u32) -> Result<String, JsError> {
    let f = read_dimacs(dimacs).map_err(|e| JsError::new(&e.to_string()))?;
    let arts = build_reduction_graph(&f, i).map_err(|e| JsError::new(&e.to_string()))?;
    let SatResult::Sat(a) = sat_solve(&f) else {
        return Err(JsError::new("formula is unsatisfiable"));
    };
    let (rep, _) = layout_reduction(&arts, &a, &SearchBudget::default(), 8).map_err(|e| JsError::new(&e.to_string()))?;
    let mut opts = options(unit_px);
    opts.show_labels = false;
    Ok(render_representation(&rep, &opts))
}
