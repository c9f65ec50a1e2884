//! Text and JSON rendering shared by the commands.

use std::fmt::Write as _;

use quadgor::construct::GridCell;
use quadgor::groebner::IdealHandle;
use quadgor::koszul::{self, BoundVerdict, KoszulCertificate, Verdict};
use quadgor::parse_io::{MachineReport, RunConfig};
use quadgor::resolution;
use quadgor::{render_betti, BettiTable, Field, Result};
use serde_json::{json, Map, Value};

pub struct Output {
    pub text: String,
    pub json: Value,
    pub warnings: Vec<String>,
}

impl Output {
    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn tuple<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

pub fn config_json(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}

pub fn config_text(cfg: &RunConfig) -> String {
    let seed = cfg.seed.map_or("none".to_string(), |s| s.to_string());
    format!(
        "# quadgor {} | {} | field {} | order {} | steps {} | slack {} | seed {}\n",
        cfg.engine_version, cfg.command, cfg.field, cfg.order, cfg.steps, cfg.slack, seed
    )
}

/// What to compute beyond Hilbert data.
pub struct Wanted {
    pub betti: bool,
    pub koszul: bool,
    pub steps: usize,
    pub slack: usize,
}

/// Everything computed about one ideal.
pub struct Analysis<F: Field> {
    pub generators: Vec<quadgor::Polynomial<F>>,
    pub betti: Option<BettiTable>,
    pub certificate: Option<KoszulCertificate>,
    pub bound: Option<BoundVerdict>,
    pub text: String,
    pub report: MachineReport,
}

pub fn analyze<F: Field>(ideal: &IdealHandle<F>, want: &Wanted, cfg: &RunConfig) -> Result<Analysis<F>> {
    let ring = ideal.ring();
    let mut text = String::new();
    let mut certs = Map::new();
    let generators = ideal.minimal_generators()?;
    let mut degrees: Vec<u32> = generators.iter().filter_map(|g| g.degree()).collect();
    degrees.sort();
    let _ = writeln!(text, "ring: {} variables ({})", ring.nvars(), ring.names().join(" "));
    let _ = writeln!(text, "minimal generators: {} of degrees {}", generators.len(), tuple(&degrees));
    for g in &generators {
        let _ = writeln!(text, "  {}", ring.format(g));
    }
    certs.insert(
        "generators".into(),
        Value::Array(generators.iter().map(|g| Value::String(ring.format(g))).collect()),
    );
    let h = resolution::hilbert(ideal)?;
    let _ = writeln!(text, "dimension: {}  codimension: {}", h.dimension, h.codimension);
    match &h.h_vector {
        Some(v) => {
            let _ = writeln!(text, "h-vector: {}", tuple(v));
        }
        None => {
            let _ = writeln!(text, "h-polynomial: {} (negative entries: not Cohen-Macaulay)", tuple(&h.h_polynomial()));
        }
    }
    let _ = writeln!(text, "multiplicity: {}", h.multiplicity);
    let mut betti = None;
    if want.betti {
        let t = resolution::betti_table(ideal)?;
        let _ = writeln!(text, "Betti table:\n{}", render_betti(&t));
        let euler = resolution::euler_identity_check(&t, ideal.k_polynomial());
        let _ = writeln!(text, "alternating Betti sums match the K-polynomial: {}", yes_no(euler));
        certs.insert("euler_identity".into(), Value::Bool(euler));
        let g = resolution::gorenstein_report(&t, &h);
        let _ = writeln!(
            text,
            "Gorenstein: {} (Cohen-Macaulay {}, type {}, symmetric table {}, symmetric h-vector {})",
            yes_no(g.gorenstein),
            yes_no(g.cohen_macaulay),
            g.cm_type,
            yes_no(g.betti_symmetric),
            yes_no(g.h_symmetric)
        );
        certs.insert("gorenstein".into(), serde_json::to_value(&g).expect("serializes"));
        if let Ok(r) = resolution::regularity_report(&t, &h) {
            let _ = writeln!(
                text,
                "reg <= pd: {} (reg {}, pd {}, complete intersection {})",
                yes_no(r.bound_holds),
                r.regularity,
                r.projective_dimension,
                yes_no(r.complete_intersection)
            );
            certs.insert("regularity_bound".into(), serde_json::to_value(&r).expect("serializes"));
        }
        betti = Some(t);
    }
    let mut certificate = None;
    let mut bound = None;
    if want.koszul {
        let quadratic = !generators.is_empty() && degrees.iter().all(|&d| d == 2);
        if ideal.is_artinian() {
            let c = koszul::koszul_certificate(ideal, want.steps, want.slack)?;
            let _ = writeln!(text, "Koszul certificate: {}", verdict_text(&c.verdict));
            let _ = writeln!(text, "Betti numbers of k over R (i <= {}, j <= i + {}):\n{}", c.steps, c.slack, render_betti(&c.betti_over_r));
            certs.insert("koszul".into(), serde_json::to_value(&c).expect("serializes"));
            certificate = Some(c);
        } else {
            let _ = writeln!(text, "Koszul certificate: skipped (quotient is not Artinian)");
        }
        if quadratic {
            match koszul::syzygy_obstruction(ideal)? {
                Some(w) => {
                    let ok = koszul::verify_witness(ring, &w.generators, &w.syzygy);
                    let _ = writeln!(
                        text,
                        "syzygy obstruction: witness found, verified {} (dim Syz_4 = {}, dim Z_4 = {})",
                        yes_no(ok),
                        w.syzygies_in_degree_4,
                        w.z_in_degree_4
                    );
                    let coords: Vec<Value> = w.syzygy.coords.iter().map(|p| Value::String(ring.format(p))).collect();
                    certs.insert(
                        "obstruction".into(),
                        json!({
                            "verified": ok,
                            "syzygy": coords,
                            "syzygies_in_degree_4": w.syzygies_in_degree_4,
                            "z_in_degree_4": w.z_in_degree_4,
                        }),
                    );
                }
                None => {
                    let _ = writeln!(text, "syzygy obstruction: none (every quadratic syzygy comes from linear and Koszul ones)");
                    certs.insert("obstruction".into(), Value::Null);
                }
            }
            if let Some(t) = &betti {
                let b = koszul::degree2_betti_bound(t)?;
                let _ = writeln!(text, "degree-two bound: {}", bound_text(&b));
                certs.insert("degree2_bound".into(), serde_json::to_value(&b).expect("serializes"));
                bound = Some(b);
            }
        }
    }
    let report = MachineReport {
        ring: ring.descriptor(),
        betti: betti.as_ref().map(|t| t.triples()).unwrap_or_default(),
        h_vector: h.h_vector.clone(),
        regularity: betti.as_ref().map(|t| t.regularity()),
        pd: betti.as_ref().map(|t| t.projective_dimension()),
        multiplicity: Some(h.multiplicity),
        certificates: Value::Object(certs),
        config: cfg.clone(),
    };
    Ok(Analysis { generators, betti, certificate, bound, text, report })
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn verdict_text(v: &Verdict) -> String {
    match v {
        Verdict::KoszulUpTo(n) => format!("Koszul up to homological degree {n} (evidence, not a proof)"),
        Verdict::NotKoszul { i, j, beta } => format!("not Koszul: β^R_{{{i},{j}}}(k) = {beta}"),
    }
}

pub fn bound_text(b: &BoundVerdict) -> String {
    match b {
        BoundVerdict::NotKoszul { beta_2_4, bound } => format!("not Koszul (β_{{2,4}} = {beta_2_4} > {bound})"),
        BoundVerdict::Inconclusive { beta_2_4, bound } => format!("inconclusive (β_{{2,4}} = {beta_2_4} <= {bound})"),
    }
}

pub fn grid_symbol(cell: &GridCell) -> &'static str {
    use quadgor::construct::GridStatus::*;
    match cell.status {
        Yes => "Y",
        No => "N",
        Unknown => "?",
        Empty => ".",
    }
}

pub fn report_json(report: &MachineReport, extra: Map<String, Value>) -> Value {
    let mut v = serde_json::to_value(report).expect("report serializes");
    if let Value::Object(m) = &mut v {
        if let Some(Value::Object(c)) = m.get_mut("certificates") {
            c.extend(extra);
        }
    }
    v
}
