//! CSV schemas.
//!
//! | file         | header                                                                                      |
//! |--------------|---------------------------------------------------------------------------------------------|
//! | ground truth | `edge_id,realized`                                                                          |
//! | trace        | `step,arm,phase,item_kind,item_id,gain,value`                                               |
//! | certificate  | `instance,b,k,delta,achieved,opt,upt,alpha_apriori,alpha_e_post,alpha_v_post,ratio_lb`      |
//!
//! Files written by the command-line tool start with a `# seed= delta= n= m=`
//! comment line (see [`metadata_comment`]). Missing values are empty fields. Numbers use the shortest representation
//! that parses back to the same value.

use crate::certify::Certificate;
use crate::datagen::GroundTruth;
use crate::error::{Error, Result};
use crate::graph::{CommBudget, ExchangeGraph};
use crate::io::opt_field;
use crate::planner::{Item, PlannerTrace};
use crate::scalar::Real;

pub const GROUND_TRUTH_HEADER: [&str; 2] = ["edge_id", "realized"];
pub const TRACE_HEADER: [&str; 7] = ["step", "arm", "phase", "item_kind", "item_id", "gain", "value"];
pub const CERTIFICATE_HEADER: [&str; 11] = [
    "instance",
    "b",
    "k",
    "delta",
    "achieved",
    "opt",
    "upt",
    "alpha_apriori",
    "alpha_e_post",
    "alpha_v_post",
    "ratio_lb",
];

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// `# seed=… delta=… n=… m=…` followed by any extra `key=value` pairs.
pub fn metadata_comment<T: Real>(graph: &ExchangeGraph<T>, seed: u64, extra: &[(&str, String)]) -> String {
    let mut line = format!(
        "# seed={seed} delta={} n={} m={}",
        graph.max_degree(),
        graph.num_vertices(),
        graph.num_edges()
    );
    for (k, v) in extra {
        line.push_str(&format!(" {k}={v}"));
    }
    line.push('\n');
    line
}

pub fn ground_truth_csv(gt: &GroundTruth) -> String {
    to_csv(
        &GROUND_TRUTH_HEADER,
        gt.realized
            .iter()
            .enumerate()
            .map(|(i, r)| vec![i.to_string(), r.to_string()]),
    )
}

pub fn parse_ground_truth(text: &str) -> Result<GroundTruth> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::parse(1, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != GROUND_TRUTH_HEADER {
        let line = header.position().map_or(1, |p| p.line() as usize);
        return Err(Error::parse(line, format!("expected header {}", GROUND_TRUTH_HEADER.join(","))));
    }
    let mut realized = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| Error::parse(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 2 {
            return Err(Error::parse(line, "expected 2 fields"));
        }
        let id: usize = rec[0].parse().map_err(|_| Error::parse(line, "invalid edge id"))?;
        if id != realized.len() {
            return Err(Error::parse(line, format!("expected edge {}, got {id}", realized.len())));
        }
        realized.push(match &rec[1] {
            "true" => true,
            "false" => false,
            other => return Err(Error::parse(line, format!("invalid boolean '{other}'"))),
        });
    }
    Ok(GroundTruth { realized })
}

pub fn trace_csv<T: Real>(trace: &PlannerTrace<T>) -> String {
    to_csv(
        &TRACE_HEADER,
        trace.steps.iter().enumerate().map(|(i, s)| {
            let (kind, id) = match s.item {
                Item::Vertex(v) => ("vertex", v.index()),
                Item::Edge(e) => ("edge", e.index()),
            };
            vec![
                i.to_string(),
                s.arm.map(|a| a.name()).unwrap_or_default().to_string(),
                s.phase.name().to_string(),
                kind.to_string(),
                id.to_string(),
                s.gain.to_string(),
                s.value.to_string(),
            ]
        }),
    )
}

/// Budget column: `b` for cardinality and knapsack budgets, per-block
/// limits joined by `/` for partition budgets.
pub fn budget_field<T: Real>(budget: &CommBudget<T>) -> String {
    match budget {
        CommBudget::Tu(b) => b.to_string(),
        CommBudget::Tn(b) => b.to_string(),
        CommBudget::Iu(l) => l.limits.iter().map(usize::to_string).collect::<Vec<_>>().join("/"),
    }
}

pub fn certificate_header() -> String {
    to_csv(&CERTIFICATE_HEADER, [])
}

/// One CSV row without the header.
pub fn certificate_row<T: Real>(c: &Certificate<T>) -> String {
    let text = to_csv(
        &CERTIFICATE_HEADER,
        [vec![
            c.instance.clone(),
            budget_field(&c.budget),
            c.k.to_string(),
            c.delta.to_string(),
            c.achieved.to_string(),
            opt_field(c.opt),
            opt_field(c.upt),
            opt_field(c.alpha_apriori),
            opt_field(c.alpha_e_post),
            opt_field(c.alpha_v_post),
            opt_field(c.ratio_lb),
        ]],
    );
    text.lines().nth(1).unwrap_or_default().to_string() + "\n"
}
