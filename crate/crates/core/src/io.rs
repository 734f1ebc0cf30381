//! Serialization: the shared instance format, canonical JSON, CSV and DOT
//! exports, and run manifests.
//!
//! JSON is always written with sorted object keys and shortest round-trip
//! floats, so equal values give byte-equal files.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::action::{ActionProfile, ValueTable};
use crate::error::{Error, Result};
use crate::game::{CascadeTrace, Orientation, Side};
use crate::netcore::{
    typed_degrees, Connectivity, IdentityAssignment, IdentitySet, IdentitySpec, Network, Population,
};
use crate::society::Society;

/// On-disk instance: network, identities, preferences and a profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub identities: Vec<IdentitySpec>,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub abilities: Vec<f64>,
    /// Identity label per individual.
    pub assignment: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub allow_disconnected: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

/// A validated instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub society: Society,
    pub assignment: IdentityAssignment,
}

impl Instance {
    pub fn new(society: Society, assignment: IdentityAssignment) -> Result<Self> {
        if assignment.n() != society.n() {
            return Err(Error::InvalidParameter(format!(
                "assignment has {} entries, network has {}",
                assignment.n(),
                society.n()
            )));
        }
        Ok(Instance { society, assignment })
    }

    pub fn from_file(file: &InstanceFile) -> Result<Self> {
        let connectivity = if file.allow_disconnected { Connectivity::Relaxed } else { Connectivity::Required };
        let edges: Vec<(usize, usize)> = file.edges.iter().map(|e| (e[0], e[1])).collect();
        let net = Network::new(file.n, &edges, connectivity)?;
        let identities = IdentitySet::new(file.identities.clone())?;
        let pop = Population::new(file.abilities.clone(), file.alpha, file.beta, file.gamma)?;
        if file.assignment.len() != file.n {
            return Err(Error::InvalidParameter(format!(
                "assignment has {} entries, n = {}",
                file.assignment.len(),
                file.n
            )));
        }
        let assignment = IdentityAssignment::from_labels(&file.assignment, &identities)?;
        Instance::new(Society::new(net, identities, pop)?, assignment)
    }

    pub fn to_file(&self) -> InstanceFile {
        let soc = &self.society;
        InstanceFile {
            n: soc.n(),
            edges: soc.net().edges().map(|(i, j)| [i, j]).collect(),
            identities: soc.identities().specs().to_vec(),
            alpha: soc.pop().alpha,
            beta: soc.pop().beta,
            gamma: soc.pop().gamma,
            abilities: soc.pop().abilities().to_vec(),
            assignment: self.assignment.labels(soc.identities()).into_iter().map(String::from).collect(),
            allow_disconnected: soc.net().connectivity() == Connectivity::Relaxed,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Instance::from_file(&serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(&self.to_file())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Instance::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    // serde_json::Value keeps objects in a BTreeMap, which sorts the keys
    let v = serde_json::to_value(value).map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Internal(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Everything wrong with an instance file, not just the first problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
    pub n: usize,
    pub m_edges: usize,
    pub components: Option<usize>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }

    /// One-line verdict, e.g. `ok: n=4, m_edges=6, connected`.
    pub fn summary(&self) -> String {
        if !self.is_ok() {
            return format!("invalid: {} error(s)", self.errors.len());
        }
        let shape = match self.components {
            Some(1) => "connected".to_string(),
            Some(k) => format!("{k} components"),
            None => "unknown connectivity".to_string(),
        };
        format!("ok: n={}, m_edges={}, {shape}", self.n, self.m_edges)
    }
}

/// Checks every invariant separately so one report lists all violations.
pub fn validate_file(file: &InstanceFile) -> ValidationReport {
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    let n = file.n;
    if n == 0 {
        errors.push("n: network must have at least one individual".to_string());
    }

    let mut clean_edges = Vec::new();
    for (k, e) in file.edges.iter().enumerate() {
        let (i, j) = (e[0], e[1]);
        let mut ok = true;
        for node in [i, j] {
            if node >= n {
                errors.push(format!("edges[{k}]: {}", Error::EdgeOutOfRange { edge_index: k, node, n }));
                ok = false;
            }
        }
        if i == j {
            errors.push(format!("edges[{k}]: {}", Error::SelfLoop { edge_index: k, node: i }));
            ok = false;
        }
        if ok {
            clean_edges.push((i, j));
        }
    }
    let mut m_edges = 0;
    let mut components = None;
    if n > 0 {
        if let Ok(net) = Network::new(n, &clean_edges, Connectivity::Relaxed) {
            m_edges = net.edge_count();
            let k = net.component_count();
            components = Some(k);
            if k > 1 && !file.allow_disconnected {
                errors.push(format!("edges: {}", Error::Disconnected { components: k }));
            }
        }
    }

    let identities = match IdentitySet::new(file.identities.clone()) {
        Ok(set) => {
            warnings.extend(set.pairing_warnings());
            Some(set)
        }
        Err(e) => {
            errors.push(format!("identities: {e}"));
            None
        }
    };

    if file.abilities.len() != n {
        errors.push(format!("abilities: {} entries, expected n = {n}", file.abilities.len()));
    }
    for (i, &w) in file.abilities.iter().enumerate() {
        if let Err(e) = Population::new(vec![w], 0.0, 0.0, 0.0) {
            errors.push(format!("abilities[{i}]: {}", e.to_string().replace("individual 0", &format!("individual {i}"))));
        }
    }
    for (name, p) in [("alpha", file.alpha), ("beta", file.beta), ("gamma", file.gamma)] {
        if !p.is_finite() || p < 0.0 {
            errors.push(format!("{name}: must be finite and non-negative, got {p}"));
        }
    }

    if file.assignment.len() != n {
        errors.push(format!("assignment: {} entries, expected n = {n}", file.assignment.len()));
    }
    if let Some(set) = &identities {
        for (i, label) in file.assignment.iter().enumerate() {
            if set.id_of(label).is_err() {
                errors.push(format!("assignment[{i}]: unknown identity label {label:?}"));
            }
        }
    }
    ValidationReport { errors, warnings, n, m_edges, components }
}

/// Parses and validates raw text; parse failures carry line and column.
pub fn validate_json(text: &str) -> Result<ValidationReport> {
    let file: InstanceFile = serde_json::from_str(text)?;
    Ok(validate_file(&file))
}

fn push_csv_record(wtr: &mut csv::Writer<Vec<u8>>, fields: &[String]) -> Result<()> {
    wtr.write_record(fields)?;
    Ok(())
}

fn finish_csv(wtr: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = wtr.into_inner().map_err(|e| Error::Internal(format!("csv flush failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// Shortest round-trip text for a float, identical to the JSON output.
pub fn fmt_f64(x: f64) -> String {
    serde_json::Value::from(x).to_string()
}

/// One row per individual: `id, identity, d_i, d_iI, x, utility`.
pub fn profile_csv(soc: &Society, assign: &IdentityAssignment, profile: &ActionProfile) -> Result<String> {
    let typed = typed_degrees(soc.net(), assign);
    let mut wtr = csv::Writer::from_writer(Vec::new());
    push_csv_record(&mut wtr, &["id", "identity", "d_i", "d_iI", "x", "utility"].map(String::from))?;
    for i in 0..soc.n() {
        let id = assign.get(i);
        push_csv_record(
            &mut wtr,
            &[
                i.to_string(),
                soc.identities().get(id).label.clone(),
                soc.net().neighbors(i).len().to_string(),
                typed[i][id.0].to_string(),
                fmt_f64(profile.x[i]),
                fmt_f64(profile.utility[i]),
            ],
        )?;
    }
    finish_csv(wtr)
}

/// Value table keyed by identity label.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledValueTable {
    pub labels: Vec<String>,
    /// `values[i][k]` is the value of individual `i` holding `labels[k]`.
    pub values: Vec<Vec<f64>>,
    pub intrinsic: Vec<Vec<f64>>,
}

pub fn label_value_table(identities: &IdentitySet, table: &ValueTable) -> LabeledValueTable {
    LabeledValueTable {
        labels: identities.specs().iter().map(|s| s.label.clone()).collect(),
        values: table.values.clone(),
        intrinsic: table.intrinsic.clone(),
    }
}

/// `id, V_<label>...` with one column per identity.
pub fn value_table_csv(identities: &IdentitySet, table: &ValueTable) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string()];
    header.extend(identities.specs().iter().map(|s| format!("V_{}", s.label)));
    push_csv_record(&mut wtr, &header)?;
    for (i, row) in table.values.iter().enumerate() {
        let mut rec = vec![i.to_string()];
        rec.extend(row.iter().map(|&v| fmt_f64(v)));
        push_csv_record(&mut wtr, &rec)?;
    }
    finish_csv(wtr)
}

/// Labels used for the two sides in trace exports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SideLabels {
    pub a: String,
    pub b: String,
}

impl SideLabels {
    pub fn from_orientation(o: Orientation, identities: &IdentitySet) -> Self {
        SideLabels { a: identities.get(o.a).label.clone(), b: identities.get(o.b).label.clone() }
    }

    pub fn get(&self, s: Side) -> &str {
        match s {
            Side::A => &self.a,
            Side::B => &self.b,
        }
    }
}

impl Default for SideLabels {
    fn default() -> Self {
        SideLabels { a: "A".into(), b: "B".into() }
    }
}

/// `round, node, old_identity, new_identity` for every switch.
pub fn trace_csv(trace: &CascadeTrace, labels: &SideLabels) -> Result<String> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    push_csv_record(&mut wtr, &["round", "node", "old_identity", "new_identity"].map(String::from))?;
    for r in &trace.rounds {
        for &i in &r.switchers {
            let new = r.assignment[i];
            push_csv_record(
                &mut wtr,
                &[r.round.to_string(), i.to_string(), labels.get(new.other()).into(), labels.get(new).into()],
            )?;
        }
    }
    finish_csv(wtr)
}

const FILL_A: &str = "#4c72b0";
const FILL_B: &str = "#dd8452";

/// One DOT graph for a snapshot; nodes are coloured by side and labelled
/// with their action when `x` is given.
pub fn snapshot_dot(name: &str, net: &Network, sides: &[Side], labels: &SideLabels, x: Option<&[f64]>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "graph {name} {{");
    let _ = writeln!(s, "  node [style=filled, fontcolor=white];");
    for (i, &side) in sides.iter().enumerate() {
        let fill = if side == Side::A { FILL_A } else { FILL_B };
        let text = match x {
            Some(x) => format!("{i}\\n{}\\nx={}", labels.get(side), fmt_f64(x[i])),
            None => format!("{i}\\n{}", labels.get(side)),
        };
        let _ = writeln!(s, "  {i} [label=\"{text}\", fillcolor=\"{fill}\"];");
    }
    for (i, j) in net.edges() {
        let _ = writeln!(s, "  {i} -- {j};");
    }
    s.push_str("}\n");
    s
}

/// The initial snapshot followed by one graph per recorded round.
pub fn trace_dot(net: &Network, trace: &CascadeTrace, labels: &SideLabels) -> String {
    let mut out = snapshot_dot("round_0", net, &trace.initial, labels, None);
    for r in &trace.rounds {
        out.push_str(&snapshot_dot(&format!("round_{}", r.round), net, &r.assignment, labels, None));
    }
    out
}

/// Provenance written next to every set of outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    /// File names relative to the output directory, sorted.
    pub outputs: Vec<String>,
    /// The only field that varies between otherwise identical runs.
    pub wall_clock_ms: u64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{cascade, CascadeMode};

    fn k4_json() -> String {
        r#"{
  "n": 4,
  "edges": [[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]],
  "identities": [{"label": "A", "mu": 1.0, "v": 1.0}, {"label": "B", "mu": 0.5, "v": 0.5}],
  "alpha": 0.5, "beta": 1.0, "gamma": 1.0,
  "abilities": [1.0, 1.0, 1.0, 1.0],
  "assignment": ["A", "A", "B", "B"]
}"#
        .to_string()
    }

    #[test]
    fn valid_k4_summary() {
        let r = validate_json(&k4_json()).unwrap();
        assert!(r.is_ok(), "{:?}", r.errors);
        assert_eq!(r.summary(), "ok: n=4, m_edges=6, connected");
    }

    #[test]
    fn reports_every_violation_with_location() {
        let text = k4_json()
            .replace("[2,3]]", "[2,3],[2,2]]")
            .replace("[1.0, 1.0, 1.0, 1.0]", "[1.0, 0.0, 1.0, -2.0]")
            .replace(r#""B", "B"]"#, r#""B", "C"]"#);
        let r = validate_json(&text).unwrap();
        let all = r.errors.join("\n");
        assert!(all.contains("self-loop at edge index 6"), "{all}");
        assert!(all.contains("abilities[1]: invalid parameter: ability must be positive (individual 1"), "{all}");
        assert!(all.contains("abilities[3]"), "{all}");
        assert!(all.contains("assignment[3]"), "{all}");
        assert_eq!(r.errors.len(), 4);
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = validate_json("{\n  \"n\": 4,\n  \"edges\": [[0,1]\n}").unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert!(line >= 3 && column > 0),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn instance_round_trips() {
        let inst = Instance::from_json(&k4_json()).unwrap();
        let text = inst.to_json().unwrap();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(inst, back);
        assert_eq!(text, back.to_json().unwrap());
    }

    #[test]
    fn canonical_json_sorts_keys() {
        let inst = Instance::from_json(&k4_json()).unwrap();
        let text = inst.to_json().unwrap();
        let keys: Vec<usize> =
            ["abilities", "alpha", "assignment", "beta", "edges"].iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn trace_exports() {
        let net = Network::new(3, &[(0, 1), (1, 2)], Connectivity::Required).unwrap();
        let tr = cascade(&net, &[Side::B; 3], &[-1.5], CascadeMode::Monotone).unwrap();
        let csv = trace_csv(&tr, &SideLabels::default()).unwrap();
        assert_eq!(csv, "round,node,old_identity,new_identity\n1,0,B,A\n1,2,B,A\n2,1,B,A\n");
        let dot = trace_dot(&net, &tr, &SideLabels::default());
        assert_eq!(dot.matches("graph round_").count(), 3);
        assert!(dot.contains("0 -- 1;"));
    }

    #[test]
    fn profile_csv_columns() {
        let inst = Instance::from_json(&k4_json()).unwrap();
        let p = crate::action::solve_actions(&inst.society, &inst.assignment).unwrap();
        let csv = profile_csv(&inst.society, &inst.assignment, &p).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("id,identity,d_i,d_iI,x,utility"));
        assert!(lines.next().unwrap().starts_with("0,A,3,1,"));
    }
}
