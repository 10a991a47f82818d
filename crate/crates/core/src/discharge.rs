//! Exact discharging on embedded graphs.
//!
//! Three schemes are built in:
//!
//! * `mlone`: `μ(x) = deg(x) − 4` on vertices and faces; a 3-face draws
//!   from neighbouring 5⁺-faces (R1) or, when it shares an edge with
//!   another 3-face, from 5⁺-faces and 5⁺-endpoints of that edge (R2).
//! * `mltwo`: `μ(v) = deg(v) − 6`, `μ(f) = 2 deg(f) − 6`; faces spread
//!   their charge over their corners (R1), good vertices pay the bank of
//!   their bad 3-face's component (R2) and banks pay bad vertices (R3).
//! * `mlthree`: the `mlone` charges and R1/R2, plus related sources (R3)
//!   and the 5a/5b/5c face rules (R4–R6).
//!
//! "Adjacent" is counted per shared edge, so a face meeting another along
//! two edges gives or takes twice.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::detect::{hypothesis_check, Family};
use crate::embedding::EmbeddedGraph;

pub type Charge = BigRational;

fn q(p: i64, d: i64) -> Charge {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

fn int(p: i64) -> Charge {
    q(p, 1)
}

/// `p/q` with the sign on the numerator, always with a denominator.
pub fn format_charge(c: &Charge) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown scheme `{0}` (expected mlone, mltwo or mlthree)")]
pub struct UnknownScheme(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    MlOne,
    MlTwo,
    MlThree,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::MlOne => "mlone",
            Scheme::MlTwo => "mltwo",
            Scheme::MlThree => "mlthree",
        }
    }

    /// The initial charges sum to `-factor * (V − E + F)`.
    pub fn euler_factor(self) -> i64 {
        match self {
            Scheme::MlTwo => 6,
            _ => 4,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = UnknownScheme;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mlone" => Ok(Scheme::MlOne),
            "mltwo" => Ok(Scheme::MlTwo),
            "mlthree" => Ok(Scheme::MlThree),
            _ => Err(UnknownScheme(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Vertex(usize),
    Face(usize),
    Bank(usize),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Vertex(i) => write!(f, "v{i}"),
            Element::Face(i) => write!(f, "f{i}"),
            Element::Bank(i) => write!(f, "B{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transfer {
    pub rule: &'static str,
    pub from: Element,
    pub to: Element,
    pub via: Option<Element>,
    pub amount: Charge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaceClass {
    FiveA,
    FiveB,
    FiveC,
}

impl FaceClass {
    pub fn tag(self) -> &'static str {
        match self {
            FaceClass::FiveA => "5a",
            FaceClass::FiveB => "5b",
            FaceClass::FiveC => "5c",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentShape {
    Tree,
    Cycle,
    Other,
}

impl ComponentShape {
    pub fn tag(self) -> &'static str {
        match self {
            ComponentShape::Tree => "tree",
            ComponentShape::Cycle => "cycle",
            ComponentShape::Other => "other",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxComponent {
    /// Indices into [`AuxGraphH::faces`].
    pub vertices: Vec<usize>,
    pub edge_count: usize,
    pub shape: ComponentShape,
}

/// The auxiliary graph on bad 3-faces: one edge per bad vertex, joining
/// the two 3-faces at that vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxGraphH {
    pub bad_vertices: Vec<usize>,
    /// Face ids of the bad 3-faces, ascending.
    pub faces: Vec<usize>,
    /// `(i, j, b)`: H-vertices `i` and `j` share bad vertex `b`.
    pub edges: Vec<(usize, usize, usize)>,
    pub component_of: Vec<usize>,
    pub components: Vec<AuxComponent>,
}

impl AuxGraphH {
    pub fn build(e: &EmbeddedGraph) -> Self {
        let g = e.graph();
        let mut tri_at: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
        for (fi, f) in e.faces().iter().enumerate() {
            if f.degree() == 3 {
                for &v in &f.walk {
                    tri_at[v].push(fi);
                }
            }
        }
        let bad_vertices: Vec<usize> = (0..g.n())
            .filter(|&v| g.degree(v) == 4 && tri_at[v].len() == 2)
            .collect();
        let mut faces: Vec<usize> = bad_vertices
            .iter()
            .flat_map(|&b| tri_at[b].iter().copied())
            .collect();
        faces.sort_unstable();
        faces.dedup();
        let index = |f: usize| faces.binary_search(&f).expect("bad 3-face");
        let edges: Vec<(usize, usize, usize)> = bad_vertices
            .iter()
            .map(|&b| (index(tri_at[b][0]), index(tri_at[b][1]), b))
            .collect();

        let k = faces.len();
        let mut component_of = vec![usize::MAX; k];
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); k];
        for &(i, j, _) in &edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut components = Vec::new();
        for s in 0..k {
            if component_of[s] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut stack = vec![s];
            let mut vertices = Vec::new();
            component_of[s] = id;
            while let Some(x) = stack.pop() {
                vertices.push(x);
                for &y in &adj[x] {
                    if component_of[y] == usize::MAX {
                        component_of[y] = id;
                        stack.push(y);
                    }
                }
            }
            vertices.sort_unstable();
            let edge_count = edges
                .iter()
                .filter(|&&(i, _, _)| component_of[i] == id)
                .count();
            let shape = if edge_count + 1 == vertices.len() {
                ComponentShape::Tree
            } else if edge_count == vertices.len() && vertices.iter().all(|&x| adj[x].len() == 2) {
                ComponentShape::Cycle
            } else {
                ComponentShape::Other
            };
            components.push(AuxComponent {
                vertices,
                edge_count,
                shape,
            });
        }
        AuxGraphH {
            bad_vertices,
            faces,
            edges,
            component_of,
            components,
        }
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0; self.faces.len()];
        for &(i, j, _) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    pub fn is_bad(&self, v: usize) -> bool {
        self.bad_vertices.binary_search(&v).is_ok()
    }

    /// Component of the bad 3-face with face id `f`.
    pub fn component_of_face(&self, f: usize) -> Option<usize> {
        self.faces
            .binary_search(&f)
            .ok()
            .map(|i| self.component_of[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeLedger {
    pub scheme: Scheme,
    pub initial: BTreeMap<Element, Charge>,
    pub transfers: Vec<Transfer>,
    pub face_classes: BTreeMap<usize, FaceClass>,
    /// `(w, f)`: `w` is a related source of the 5-face `f`.
    pub sources: Vec<(usize, usize)>,
    pub aux: Option<AuxGraphH>,
    pub warnings: Vec<String>,
}

impl ChargeLedger {
    fn push(
        &mut self,
        rule: &'static str,
        from: Element,
        to: Element,
        via: Option<Element>,
        amount: Charge,
    ) {
        if !amount.is_zero() {
            self.transfers.push(Transfer {
                rule,
                from,
                to,
                via,
                amount,
            });
        }
    }

    pub fn final_charges(&self) -> BTreeMap<Element, Charge> {
        let mut out = self.initial.clone();
        for t in &self.transfers {
            *out.entry(t.from).or_insert_with(Charge::zero) -= &t.amount;
            *out.entry(t.to).or_insert_with(Charge::zero) += &t.amount;
        }
        out
    }

    pub fn sum_initial(&self) -> Charge {
        self.initial.values().sum()
    }

    pub fn sum_final(&self) -> Charge {
        self.final_charges().values().sum()
    }

    pub fn is_conserved(&self) -> bool {
        self.sum_initial() == self.sum_final()
    }

    pub fn negatives(&self) -> Vec<(Element, Charge)> {
        self.final_charges()
            .into_iter()
            .filter(|(_, c)| c.is_negative())
            .collect()
    }

    /// Final charge of each bank, by component.
    pub fn bank_finals(&self) -> Vec<(usize, Charge)> {
        self.final_charges()
            .into_iter()
            .filter_map(|(el, c)| match el {
                Element::Bank(b) => Some((b, c)),
                _ => None,
            })
            .collect()
    }

    pub fn summary_line(&self) -> String {
        format!(
            "SUM_INITIAL {} SUM_FINAL {} NEGATIVES {}",
            format_charge(&self.sum_initial()),
            format_charge(&self.sum_final()),
            self.negatives().len()
        )
    }

    /// Line-oriented ledger: elements, transfers, classifications, then the
    /// summary line.
    pub fn to_text(&self) -> String {
        let mut out = format!("scheme {}\n", self.scheme);
        let finals = self.final_charges();
        for (el, init) in &self.initial {
            let _ = writeln!(
                out,
                "element {el} initial {} final {}",
                format_charge(init),
                format_charge(&finals[el])
            );
        }
        for t in &self.transfers {
            let _ = write!(
                out,
                "transfer {} {} -> {} {}",
                t.rule,
                t.from,
                t.to,
                format_charge(&t.amount)
            );
            if let Some(via) = t.via {
                let _ = write!(out, " via {via}");
            }
            out.push('\n');
        }
        for (f, class) in &self.face_classes {
            let _ = writeln!(out, "class f{f} {}", class.tag());
        }
        for (w, f) in &self.sources {
            let _ = writeln!(out, "source v{w} sink f{f}");
        }
        if let Some(aux) = &self.aux {
            for (i, comp) in aux.components.iter().enumerate() {
                let faces: Vec<String> = comp
                    .vertices
                    .iter()
                    .map(|&x| format!("f{}", aux.faces[x]))
                    .collect();
                let _ = writeln!(
                    out,
                    "bank B{i} shape {} faces {}",
                    comp.shape.tag(),
                    faces.join(" ")
                );
            }
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning {w}");
        }
        out.push_str(&self.summary_line());
        out.push('\n');
        out
    }
}

/// Ledger holding only the scheme's initial charges.
pub fn initial_charges(e: &EmbeddedGraph, scheme: Scheme) -> ChargeLedger {
    let g = e.graph();
    let mut initial = BTreeMap::new();
    for v in 0..g.n() {
        let d = g.degree(v) as i64;
        let c = match scheme {
            Scheme::MlTwo => d - 6,
            _ => d - 4,
        };
        initial.insert(Element::Vertex(v), int(c));
    }
    for (i, f) in e.faces().iter().enumerate() {
        let d = f.degree() as i64;
        let c = match scheme {
            Scheme::MlTwo => 2 * d - 6,
            _ => d - 4,
        };
        initial.insert(Element::Face(i), int(c));
    }
    let mut warnings = Vec::new();
    if !e.faces_are_cycles() {
        warnings.push(
            "some face boundary is not a cycle; rules applied literally to the walks".to_string(),
        );
    }
    let aux = (scheme == Scheme::MlTwo).then(|| {
        let aux = AuxGraphH::build(e);
        for b in 0..aux.components.len() {
            initial.insert(Element::Bank(b), Charge::zero());
        }
        aux
    });
    ChargeLedger {
        scheme,
        initial,
        transfers: Vec::new(),
        face_classes: BTreeMap::new(),
        sources: Vec::new(),
        aux,
        warnings,
    }
}

/// Runs a scheme to completion.
pub fn run_discharge(e: &EmbeddedGraph, scheme: Scheme) -> ChargeLedger {
    let mut ledger = initial_charges(e, scheme);
    match scheme {
        Scheme::MlOne => triangle_rules(e, &mut ledger),
        Scheme::MlTwo => mltwo_rules(e, &mut ledger),
        Scheme::MlThree => {
            triangle_rules(e, &mut ledger);
            five_face_rules(e, &mut ledger);
        }
    }
    ledger
}

/// Per face, the faces across each boundary edge, in walk order.
fn across(e: &EmbeddedGraph, f: usize) -> Vec<(usize, usize, usize)> {
    e.face(f)
        .darts()
        .map(|(u, v)| (u, v, e.face_across(u, v).expect("dart of a traced face")))
        .collect()
}

fn is_triangle(e: &EmbeddedGraph, f: usize) -> bool {
    e.face(f).degree() == 3
}

fn is_five_plus(e: &EmbeddedGraph, f: usize) -> bool {
    e.face(f).degree() >= 5
}

/// R1 and R2 of the `mlone` scheme (shared by `mlthree`).
fn triangle_rules(e: &EmbeddedGraph, ledger: &mut ChargeLedger) {
    let g = e.graph();
    for t in 0..e.faces().len() {
        if !is_triangle(e, t) {
            continue;
        }
        let sides = across(e, t);
        if sides.iter().all(|&(_, _, s)| s != t && is_five_plus(e, s)) {
            for &(_, _, s) in &sides {
                ledger.push("R1", Element::Face(s), Element::Face(t), None, q(1, 3));
            }
            continue;
        }
        for &(w1, w2, s) in &sides {
            if s == t || !is_triangle(e, s) {
                continue;
            }
            let both_four = g.degree(w1) == 4 && g.degree(w2) == 4;
            let share = if both_four { q(1, 2) } else { q(1, 3) };
            for &(_, _, r) in &sides {
                if r != t && is_five_plus(e, r) {
                    ledger.push(
                        "R2",
                        Element::Face(r),
                        Element::Face(t),
                        None,
                        share.clone(),
                    );
                }
            }
            if !both_four {
                for w in [w1, w2] {
                    if g.degree(w) >= 5 {
                        ledger.push("R2", Element::Vertex(w), Element::Face(t), None, q(1, 3));
                    }
                }
            }
        }
    }
}

/// R3–R6 of the `mlthree` scheme.
fn five_face_rules(e: &EmbeddedGraph, ledger: &mut ChargeLedger) {
    let g = e.graph();
    for f in 0..e.faces().len() {
        if e.face(f).degree() != 5 {
            continue;
        }
        let sides = across(e, f);
        let adjacent_triangles: Vec<(usize, usize, usize)> = sides
            .iter()
            .copied()
            .filter(|&(_, _, s)| s != f && is_triangle(e, s))
            .collect();
        let alpha = adjacent_triangles.len();
        let mut big: Vec<usize> = e
            .face(f)
            .walk
            .iter()
            .copied()
            .filter(|&v| g.degree(v) >= 5)
            .collect();
        big.sort_unstable();
        big.dedup();
        if big.is_empty() {
            let all_four = e.face(f).walk.iter().all(|&v| g.degree(v) == 4);
            for &(w1, w2, t) in &adjacent_triangles {
                let apex = e
                    .face(t)
                    .walk
                    .iter()
                    .copied()
                    .find(|&x| x != w1 && x != w2)
                    .expect("triangle apex");
                if all_four && g.degree(apex) >= 5 {
                    ledger.sources.push((apex, f));
                    if alpha >= 4 {
                        ledger.push(
                            "R3",
                            Element::Vertex(apex),
                            Element::Face(f),
                            Some(Element::Face(t)),
                            q(1, 6),
                        );
                    }
                }
            }
            continue;
        }
        let class = match alpha {
            5 => Some(FaceClass::FiveA),
            4 => Some(FaceClass::FiveB),
            3 if adjacent_triangles
                .iter()
                .any(|&(_, _, t)| has_four_four_triangle_neighbour(e, t)) =>
            {
                Some(FaceClass::FiveC)
            }
            _ => None,
        };
        let Some(class) = class else { continue };
        ledger.face_classes.insert(f, class);
        let count = big.len() as i64;
        let (rule, amount) = match class {
            FaceClass::FiveA => ("R4", q(2, 3 * count)),
            FaceClass::FiveB => ("R5", q(1, 3 * count)),
            FaceClass::FiveC => ("R6", q(1, 6)),
        };
        for &w in &big {
            ledger.push(
                rule,
                Element::Vertex(w),
                Element::Face(f),
                None,
                amount.clone(),
            );
        }
    }
}

/// Whether the 3-face `t` meets another 3-face along an edge whose
/// endpoints both have degree 4.
fn has_four_four_triangle_neighbour(e: &EmbeddedGraph, t: usize) -> bool {
    let g = e.graph();
    across(e, t)
        .into_iter()
        .any(|(u, v, s)| s != t && is_triangle(e, s) && g.degree(u) == 4 && g.degree(v) == 4)
}

fn mltwo_rules(e: &EmbeddedGraph, ledger: &mut ChargeLedger) {
    let g = e.graph();
    let aux = ledger.aux.clone().expect("mltwo ledger carries H");
    for (fi, face) in e.faces().iter().enumerate() {
        let d = face.degree() as i64;
        if d == 0 {
            continue;
        }
        let share = q(2 * d - 6, d);
        for &v in &face.walk {
            ledger.push(
                "R1",
                Element::Face(fi),
                Element::Vertex(v),
                None,
                share.clone(),
            );
        }
    }
    for &f in &aux.faces {
        let bank = Element::Bank(aux.component_of_face(f).expect("bad face"));
        for &v in &e.face(f).walk {
            if !aux.is_bad(v) {
                ledger.push(
                    "R2",
                    Element::Vertex(v),
                    bank,
                    Some(Element::Face(f)),
                    q(2, 5),
                );
            }
        }
    }
    for &(i, _, b) in &aux.edges {
        ledger.push(
            "R3",
            Element::Bank(aux.component_of[i]),
            Element::Vertex(b),
            None,
            q(2, 5),
        );
    }
    let crowded = (0..g.n()).filter(|&v| {
        g.degree(v) == 4
            && e.faces()
                .iter()
                .filter(|f| f.degree() == 3 && f.walk.contains(&v))
                .count()
                > 2
    });
    for v in crowded {
        ledger.warnings.push(format!(
            "v{v} has degree 4 and more than two 3-faces; not counted as bad"
        ));
    }
    if aux.max_degree() > 3 {
        ledger
            .warnings
            .push(format!("H has maximum degree {}", aux.max_degree()));
    }
    for (i, comp) in aux.components.iter().enumerate() {
        if comp.shape == ComponentShape::Other {
            ledger
                .warnings
                .push(format!("component B{i} of H is neither a tree nor a cycle"));
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub scheme: Scheme,
    pub hypotheses: Vec<(Family, bool)>,
    pub min_degree: usize,
    pub euler_characteristic: i64,
    pub expected_initial: Charge,
    pub initial_matches_euler: bool,
    pub conserved: bool,
    pub negatives: Vec<(Element, Charge)>,
    /// `(component, final)` for tree components of H, which must end at 6/5.
    pub tree_banks: Vec<(usize, Charge)>,
    pub ledger: ChargeLedger,
}

impl AuditReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|&(_, ok)| ok)
    }

    pub fn tree_banks_ok(&self) -> bool {
        self.tree_banks.iter().all(|(_, c)| *c == q(6, 5))
    }

    /// An input meeting every hypothesis with no negative element yet a
    /// negative total is impossible; seeing one means a bug.
    pub fn contradiction(&self) -> bool {
        self.hypotheses_hold()
            && self.min_degree >= 4
            && matches!(self.euler_characteristic, 0 | 2)
            && self.negatives.is_empty()
            && self.ledger.sum_final().is_negative()
    }

    pub fn is_clean(&self) -> bool {
        self.initial_matches_euler
            && self.conserved
            && self.tree_banks_ok()
            && !self.contradiction()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (fam, ok) in &self.hypotheses {
            let _ = writeln!(
                out,
                "hypothesis {fam} {}",
                if *ok { "holds" } else { "fails" }
            );
        }
        let _ = writeln!(out, "min_degree {}", self.min_degree);
        let _ = writeln!(out, "euler {}", self.euler_characteristic);
        let _ = writeln!(
            out,
            "initial_sum {} expected {}",
            if self.initial_matches_euler {
                "ok"
            } else {
                "MISMATCH"
            },
            format_charge(&self.expected_initial)
        );
        let _ = writeln!(
            out,
            "conservation {}",
            if self.conserved { "exact" } else { "BROKEN" }
        );
        for (b, c) in &self.tree_banks {
            let _ = writeln!(out, "tree_bank B{b} {}", format_charge(c));
        }
        for (el, c) in &self.negatives {
            let _ = writeln!(out, "negative {el} {}", format_charge(c));
        }
        if self.contradiction() {
            out.push_str(
                "contradiction hypotheses hold but no element is negative and the total is\n",
            );
        }
        out.push_str(&self.ledger.to_text());
        out
    }
}

pub fn discharge_audit(e: &EmbeddedGraph, scheme: Scheme, hypotheses: &[Family]) -> AuditReport {
    let g = e.graph();
    let ledger = run_discharge(e, scheme);
    let euler = e.euler_characteristic();
    let expected_initial = int(-scheme.euler_factor() * euler);
    let tree_banks = ledger
        .aux
        .as_ref()
        .map(|aux| {
            let finals = ledger.bank_finals();
            aux.components
                .iter()
                .enumerate()
                .filter(|(_, c)| c.shape == ComponentShape::Tree)
                .map(|(i, _)| finals[i].clone())
                .collect()
        })
        .unwrap_or_default();
    AuditReport {
        scheme,
        hypotheses: hypotheses
            .iter()
            .map(|&h| (h, hypothesis_check(g, h)))
            .collect(),
        min_degree: g.min_degree().unwrap_or(0),
        euler_characteristic: euler,
        initial_matches_euler: ledger.sum_initial() == expected_initial,
        expected_initial,
        conserved: ledger.is_conserved(),
        negatives: ledger.negatives(),
        tree_banks,
        ledger,
    }
}
