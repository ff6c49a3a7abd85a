//! The rank-by-family table of L-S categories and per-space reports.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::cone::Refusal;
use crate::solver::{ganea_check, BoundInterval, GaneaStatus, Invariant, Solution, SpaceRecord};

/// Shown for unknown entries.
pub const UNKNOWN: &str = "-";

#[derive(Debug, Clone, Copy)]
enum Slot {
    Empty,
    /// A whole family (`SU(n+1)`, ...); never determined by a finite corpus.
    Generic(&'static str),
    /// Label as printed, and the corpus space it stands for.
    Space(&'static str, &'static str),
}

use Slot::{Empty, Generic, Space};

const fn sp(name: &'static str) -> Slot {
    Space(name, name)
}

pub const RANK_HEADERS: [&str; 5] = ["1", "2", "3", "4", "n (>=5)"];

const LAYOUT: &[(&str, [Slot; 5])] = &[
    ("A", [sp("SU(2)"), sp("SU(3)"), sp("SU(4)"), sp("SU(5)"), Generic("SU(n+1)")]),
    ("A", [Empty, Empty, sp("SO(6)"), Empty, Empty]),
    ("A", [sp("PU(2)"), sp("PU(3)"), sp("PU(4)"), sp("PU(5)"), Generic("PU(n+1)")]),
    ("B", [sp("Spin(3)"), sp("Spin(5)"), sp("Spin(7)"), sp("Spin(9)"), Generic("Spin(2n+1)")]),
    ("B", [sp("SO(3)"), sp("SO(5)"), sp("SO(7)"), sp("SO(9)"), Generic("SO(2n+1)")]),
    ("C", [sp("Sp(1)"), sp("Sp(2)"), sp("Sp(3)"), sp("Sp(4)"), Generic("Sp(n)")]),
    ("C", [sp("PSp(1)"), sp("PSp(2)"), sp("PSp(3)"), sp("PSp(4)"), Generic("PSp(n)")]),
    ("D", [Empty, Empty, sp("Spin(6)"), sp("Spin(8)"), Generic("Spin(2n)")]),
    ("D", [Empty, Empty, sp("SO(6)"), sp("SO(8)"), Generic("SO(2n)")]),
    // PO(6) = SU(4)/C4.
    ("D", [Empty, Empty, Space("PO(6)", "PU(4)"), sp("PO(8)"), Generic("PO(2n)")]),
    ("D", [Empty, Empty, Empty, Empty, Generic("Ss(2n)")]),
    ("Exc", [Empty, sp("G2"), Empty, sp("F4"), Generic("E6, E7, E8")]),
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub label: String,
    /// The corpus space behind the label, if the corpus declares it.
    pub space: Option<String>,
    /// `cat` of that space.
    pub cat: Option<BoundInterval>,
    pub display: String,
}

impl TableCell {
    pub fn value(&self) -> Option<u32> {
        self.cat.and_then(|c| c.value())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub family: String,
    /// One entry per rank column; `None` where the table has no group.
    pub cells: Vec<Option<TableCell>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub rows: Vec<TableRow>,
}

impl Table {
    /// The cell for a printed label such as `PO(6)`.
    pub fn cell(&self, label: &str) -> Option<&TableCell> {
        self.rows
            .iter()
            .flat_map(|r| r.cells.iter().flatten())
            .find(|c| c.label == label)
    }
}

fn cell_display(rec: Option<&SpaceRecord>) -> String {
    match rec {
        None => UNKNOWN.to_string(),
        Some(r) if r.is_halted() => format!("{UNKNOWN} (contradiction)"),
        Some(r) => {
            let cat = r.interval(Invariant::Cat);
            match cat.value() {
                Some(v) => v.to_string(),
                None => format!("{UNKNOWN} {cat}"),
            }
        }
    }
}

pub fn build_table(solution: &Solution) -> Table {
    let rows = LAYOUT
        .iter()
        .map(|(family, slots)| TableRow {
            family: family.to_string(),
            cells: slots
                .iter()
                .map(|slot| match *slot {
                    Empty => None,
                    Generic(label) => Some(TableCell {
                        label: label.to_string(),
                        space: None,
                        cat: None,
                        display: UNKNOWN.to_string(),
                    }),
                    Space(label, name) => {
                        let rec = solution.spaces.get(name);
                        Some(TableCell {
                            label: label.to_string(),
                            space: rec.map(|r| r.name.clone()),
                            cat: rec.filter(|r| !r.is_halted()).map(|r| r.interval(Invariant::Cat)),
                            display: cell_display(rec),
                        })
                    }
                })
                .collect(),
        })
        .collect();
    Table { rows }
}

/// Plain-text table followed by the provenance of every space it shows.
pub fn render_table_text(solution: &Solution) -> String {
    let table = build_table(solution);
    let texts: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            r.cells
                .iter()
                .map(|c| c.as_ref().map_or(String::new(), |c| format!("{} {}", c.label, c.display)))
                .collect()
        })
        .collect();
    let mut widths: Vec<usize> = RANK_HEADERS.iter().map(|h| h.len()).collect();
    for row in &texts {
        for (w, t) in widths.iter_mut().zip(row) {
            *w = (*w).max(t.chars().count());
        }
    }
    let fam_w = 4;
    let mut out = String::new();
    let mut header = format!("{:fam_w$}", "rank");
    for (h, w) in RANK_HEADERS.iter().zip(&widths) {
        let _ = write!(header, " | {h:w$}");
    }
    out.push_str(header.trim_end());
    out.push('\n');
    let rule_len = fam_w + widths.iter().map(|w| w + 3).sum::<usize>();
    let mut prev_family = "";
    for (row, cells) in table.rows.iter().zip(&texts) {
        let fam = if row.family == prev_family {
            ""
        } else {
            out.push_str(&"-".repeat(rule_len));
            out.push('\n');
            row.family.as_str()
        };
        prev_family = &row.family;
        let mut line = format!("{fam:fam_w$}");
        for (t, w) in cells.iter().zip(&widths) {
            let pad = w - t.chars().count();
            let _ = write!(line, " | {t}{}", " ".repeat(pad));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }

    out.push_str("\nprovenance:\n");
    let mut shown: Vec<&str> = table
        .rows
        .iter()
        .flat_map(|r| r.cells.iter().flatten())
        .filter_map(|c| c.space.as_deref())
        .collect();
    shown.sort_unstable();
    shown.dedup();
    for name in shown {
        out.push_str(&render_space_text(&solution.spaces[name]));
    }
    out
}

/// Bounds, Ganea status and provenance of one space.
pub fn render_space_text(rec: &SpaceRecord) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", rec.name);
    for inv in Invariant::ALL {
        let _ = writeln!(out, "  {:<8} {}", inv.keyword(), rec.interval(inv));
    }
    let _ = writeln!(out, "  ganea    {}", ganea_check(rec));
    if let Some(c) = &rec.contradiction {
        let _ = writeln!(out, "  {c}");
    }
    for e in &rec.provenance {
        let _ = writeln!(out, "    {e}");
    }
    out
}

fn ganea_value(status: GaneaStatus) -> Value {
    match status {
        GaneaStatus::Holds(rule) => json!({ "status": "holds", "rule": rule }),
        GaneaStatus::Unknown => json!({ "status": "unknown", "rule": null }),
    }
}

/// The JSON object describing one space.
pub fn space_json(rec: &SpaceRecord) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(rec.name));
    for inv in Invariant::ALL {
        m.insert(inv.keyword().into(), json!(rec.interval(inv)));
    }
    m.insert("ganea".into(), json!(ganea_check(rec).label()));
    m.insert("ganea_rule".into(), ganea_value(ganea_check(rec))["rule"].clone());
    m.insert("provenance".into(), json!(rec.provenance));
    m.insert("contradiction".into(), json!(rec.contradiction));
    m.insert("wcat".into(), json!(rec.wcat));
    Value::Object(m)
}

fn refusal_json(r: &Refusal) -> Value {
    json!({ "bundle": r.bundle, "inconsistent": r.reason.inconsistent, "message": r.reason.message })
}

pub fn render_table_json(solution: &Solution) -> Value {
    let spaces: Map<String, Value> = solution
        .spaces
        .iter()
        .map(|(n, r)| (n.clone(), space_json(r)))
        .collect();
    json!({
        "columns": RANK_HEADERS,
        "table": build_table(solution),
        "spaces": spaces,
        "refusals": solution.refusals.iter().map(refusal_json).collect::<Vec<_>>(),
        "search_failures": solution.search_failures,
    })
}
