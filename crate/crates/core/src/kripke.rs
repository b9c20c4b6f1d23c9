//! Finite Kripke frames over (parameter, evidence) worlds.
//!
//! A world is a pair `(θ, E)` with θ on a finite grid and `E` an observation
//! sequence of length at most the horizon over a finite alphabet. Two
//! relations are checked:
//!
//! * `w R_c v ⟺ θ_v ∈ c(E_w)`, with the evidence of `v` unconstrained;
//! * `w R_E v ⟺ E_w` is a prefix of `E_v`, with θ_v unconstrained.
//!
//! Formulas are evaluated bottom-up over the whole frame, one truth table per
//! distinct subformula. Two semantics are offered. [`Semantics::Grid`] is the
//! literal finite frame: `R_c` only reaches grid points. [`Semantics::Continuum`]
//! lets θ range over the whole ambient and stores, per evidence node, the
//! region of θ at which a subformula holds; grid worlds are then read off
//! those regions. Unnested `□_c`/`◇_c` agree exactly with region containment
//! under the continuum semantics, and at grid resolution under the other.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::confidence::{ConfidenceFunction, ConfidenceRule, Evidence, SamplingModel};
use crate::error::{Error, Result};
use crate::region::{Endpoint, Interval, RegionSet};

/// Largest evidence universe a frame will enumerate.
pub const MAX_NODES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Alphabet {
    Bits,
    /// Finitely many real observation values for a normal-model rule.
    Reals(Vec<f64>),
}

impl Alphabet {
    pub fn size(&self) -> usize {
        match self {
            Alphabet::Bits => 2,
            Alphabet::Reals(v) => v.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    Grid,
    #[default]
    Continuum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct World {
    pub theta: f64,
    pub evidence: Evidence,
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.theta, evidence_label(&self.evidence))
    }
}

pub fn evidence_label(e: &Evidence) -> String {
    match e.to_bitstring() {
        Some(s) if s.is_empty() => "ε".into(),
        Some(s) => s,
        None => e.to_json().to_string(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModalFormula {
    Atom { name: String, h: RegionSet },
    Not(Box<ModalFormula>),
    And(Box<ModalFormula>, Box<ModalFormula>),
    Or(Box<ModalFormula>, Box<ModalFormula>),
    BoxC(Box<ModalFormula>),
    DiamondC(Box<ModalFormula>),
    BoxE(Box<ModalFormula>),
    DiamondE(Box<ModalFormula>),
}

impl ModalFormula {
    pub fn atom(name: impl Into<String>, h: RegionSet) -> Self {
        ModalFormula::Atom {
            name: name.into(),
            h,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        ModalFormula::Not(Box::new(self))
    }

    pub fn and(self, other: ModalFormula) -> Self {
        ModalFormula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: ModalFormula) -> Self {
        ModalFormula::Or(Box::new(self), Box::new(other))
    }

    pub fn box_c(self) -> Self {
        ModalFormula::BoxC(Box::new(self))
    }

    pub fn diamond_c(self) -> Self {
        ModalFormula::DiamondC(Box::new(self))
    }

    pub fn box_e(self) -> Self {
        ModalFormula::BoxE(Box::new(self))
    }

    pub fn diamond_e(self) -> Self {
        ModalFormula::DiamondE(Box::new(self))
    }

    pub fn depth(&self) -> usize {
        match self {
            ModalFormula::Atom { .. } => 0,
            ModalFormula::Not(a) => a.depth(),
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) => a.depth().max(b.depth()),
            ModalFormula::BoxC(a)
            | ModalFormula::DiamondC(a)
            | ModalFormula::BoxE(a)
            | ModalFormula::DiamondE(a) => 1 + a.depth(),
        }
    }

    fn atoms(&self, out: &mut Vec<(String, RegionSet)>) {
        match self {
            ModalFormula::Atom { name, h } => out.push((name.clone(), h.clone())),
            ModalFormula::Not(a)
            | ModalFormula::BoxC(a)
            | ModalFormula::DiamondC(a)
            | ModalFormula::BoxE(a)
            | ModalFormula::DiamondE(a) => a.atoms(out),
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    /// Parses `(diamondE (diamondC (atom H)))`, resolving atom names in
    /// `atoms`. `and`/`or` take two or more operands.
    pub fn parse(src: &str, atoms: &HashMap<String, RegionSet>) -> Result<Self> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let f = parse_expr(&tokens, &mut pos, atoms)?;
        if pos != tokens.len() {
            return Err(parse_error(&tokens, pos, "trailing input"));
        }
        Ok(f)
    }
}

impl fmt::Display for ModalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModalFormula::Atom { name, .. } => write!(f, "(atom {name})"),
            ModalFormula::Not(a) => write!(f, "(not {a})"),
            ModalFormula::And(a, b) => write!(f, "(and {a} {b})"),
            ModalFormula::Or(a, b) => write!(f, "(or {a} {b})"),
            ModalFormula::BoxC(a) => write!(f, "(boxC {a})"),
            ModalFormula::DiamondC(a) => write!(f, "(diamondC {a})"),
            ModalFormula::BoxE(a) => write!(f, "(boxE {a})"),
            ModalFormula::DiamondE(a) => write!(f, "(diamondE {a})"),
        }
    }
}

/// Tokens with their byte offsets.
fn tokenize(src: &str) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    let mut cur: Option<(usize, String)> = None;
    for (i, ch) in src.char_indices() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if let Some(t) = cur.take() {
                out.push(t);
            }
            if !ch.is_whitespace() {
                out.push((i, ch.to_string()));
            }
        } else {
            cur.get_or_insert_with(|| (i, String::new())).1.push(ch);
        }
    }
    out.extend(cur);
    out
}

fn parse_error(tokens: &[(usize, String)], pos: usize, msg: &str) -> Error {
    let at = match tokens.get(pos) {
        Some((o, t)) => format!("offset {o} ({t:?})"),
        None => {
            let end = tokens.last().map_or(0, |(o, t)| o + t.len());
            format!("offset {end} (end of input)")
        }
    };
    Error::InvalidParameter(format!("formula: {msg} at {at}"))
}

fn parse_expr(
    tokens: &[(usize, String)],
    pos: &mut usize,
    atoms: &HashMap<String, RegionSet>,
) -> Result<ModalFormula> {
    let expect = |pos: &mut usize, want: &str| -> Result<()> {
        match tokens.get(*pos) {
            Some((_, t)) if t == want => {
                *pos += 1;
                Ok(())
            }
            _ => Err(parse_error(tokens, *pos, &format!("expected {want:?}"))),
        }
    };
    expect(pos, "(")?;
    let op_pos = *pos;
    let op = tokens
        .get(*pos)
        .ok_or_else(|| parse_error(tokens, *pos, "expected an operator"))?
        .1
        .clone();
    *pos += 1;
    let mut args = Vec::new();
    let f = if op == "atom" {
        let name = match tokens.get(*pos) {
            Some((_, t)) if t != "(" && t != ")" => t.clone(),
            _ => return Err(parse_error(tokens, *pos, "expected an atom name")),
        };
        let h = atoms
            .get(&name)
            .ok_or_else(|| parse_error(tokens, *pos, &format!("unknown atom {name:?}")))?
            .clone();
        *pos += 1;
        ModalFormula::atom(name, h)
    } else {
        while matches!(tokens.get(*pos), Some((_, t)) if t == "(") {
            args.push(parse_expr(tokens, pos, atoms)?);
        }
        let unary = |args: Vec<ModalFormula>,
                     wrap: fn(Box<ModalFormula>) -> ModalFormula|
         -> Result<ModalFormula> {
            match <[ModalFormula; 1]>::try_from(args) {
                Ok([a]) => Ok(wrap(Box::new(a))),
                Err(_) => Err(parse_error(tokens, op_pos, "expected exactly one operand")),
            }
        };
        let fold = |args: Vec<ModalFormula>,
                    join: fn(ModalFormula, ModalFormula) -> ModalFormula|
         -> Result<ModalFormula> {
            if args.len() < 2 {
                return Err(parse_error(
                    tokens,
                    op_pos,
                    "expected at least two operands",
                ));
            }
            Ok(args.into_iter().reduce(join).expect("nonempty"))
        };
        match op.as_str() {
            "not" => unary(args, ModalFormula::Not)?,
            "boxC" | "box_c" => unary(args, ModalFormula::BoxC)?,
            "diamondC" | "diamond_c" => unary(args, ModalFormula::DiamondC)?,
            "boxE" | "box_e" => unary(args, ModalFormula::BoxE)?,
            "diamondE" | "diamond_e" => unary(args, ModalFormula::DiamondE)?,
            "and" => fold(args, ModalFormula::and)?,
            "or" => fold(args, ModalFormula::or)?,
            _ => {
                return Err(parse_error(
                    tokens,
                    op_pos,
                    &format!("unknown operator {op:?}"),
                ))
            }
        }
    };
    expect(pos, ")")?;
    Ok(f)
}

/// A PEP failure: no extension of `evidence` has a region that contains
/// θ and fits inside `cell`.
#[derive(Debug, Clone, PartialEq)]
pub struct PepCounterexample {
    pub theta: f64,
    pub cell: Interval,
    pub evidence: Evidence,
}

#[derive(Debug, Clone)]
struct Node {
    evidence: Evidence,
    depth: usize,
    children: Vec<usize>,
}

/// Truth table of one formula over every world.
#[derive(Debug, Clone)]
enum Table {
    /// Indexed `[node][grid]`.
    Grid(Vec<Vec<bool>>),
    /// Region of θ at which the formula holds, per node.
    Continuum(Vec<RegionSet>),
}

#[derive(Debug, Clone)]
pub struct Frame {
    grid: Vec<f64>,
    alphabet: Alphabet,
    horizon: usize,
    rule: ConfidenceRule,
    semantics: Semantics,
    pep_radius: usize,
    nodes: Vec<Node>,
    regions: Vec<RegionSet>,
    /// `membership[node][g]`: whether grid point g lies in `c(E_node)`.
    membership: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelCheckReport {
    pub formula: String,
    pub semantics: Semantics,
    pub worlds_total: usize,
    pub worlds_satisfying: usize,
    /// Up to ten worlds where the formula fails, as `(θ, evidence)` labels.
    pub counterexamples: Vec<(f64, String)>,
}

impl Frame {
    pub fn new(
        grid: Vec<f64>,
        alphabet: Alphabet,
        horizon: usize,
        rule: ConfidenceRule,
    ) -> Result<Self> {
        let ambient = rule.ambient();
        if grid.is_empty() {
            return Err(Error::InvalidParameter("theta grid is empty".into()));
        }
        if let Some(bad) = grid.iter().find(|t| !ambient.contains_point(**t)) {
            return Err(Error::InvalidParameter(format!(
                "grid point {bad} lies outside the ambient {ambient}"
            )));
        }
        let model = rule.sampling_model(horizon.max(1))?;
        let sigma = match (&alphabet, model) {
            (Alphabet::Bits, SamplingModel::BernoulliSequence { .. }) => None,
            (Alphabet::Reals(v), SamplingModel::NormalKnownSigma { sigma }) if !v.is_empty() => {
                Some(sigma)
            }
            (Alphabet::Reals(_), SamplingModel::NormalKnownSigma { .. }) => {
                return Err(Error::InvalidParameter("alphabet is empty".into()))
            }
            _ => {
                return Err(Error::IncompatibleModel(
                    "alphabet does not match the rule's sampling model".into(),
                ))
            }
        };
        let total: usize = (0..=horizon)
            .try_fold(0usize, |acc, k| {
                alphabet
                    .size()
                    .checked_pow(k as u32)
                    .and_then(|c| acc.checked_add(c))
            })
            .filter(|&t| t <= MAX_NODES)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("evidence universe exceeds {MAX_NODES} sequences"))
            })?;

        let build = |bits: Option<Vec<bool>>, reals: Option<Vec<f64>>| -> Result<Evidence> {
            match (bits, reals) {
                (Some(b), _) => Evidence::bits(horizon.max(1), b),
                (_, Some(r)) => Evidence::normal(sigma.expect("normal alphabet"), r),
                _ => unreachable!(),
            }
        };
        let mut nodes = Vec::with_capacity(total);
        let mut seqs_b: Vec<Vec<bool>> = Vec::new();
        let mut seqs_r: Vec<Vec<f64>> = Vec::new();
        match &alphabet {
            Alphabet::Bits => seqs_b.push(Vec::new()),
            Alphabet::Reals(_) => seqs_r.push(Vec::new()),
        }
        nodes.push(Node {
            evidence: build(seqs_b.first().cloned(), seqs_r.first().cloned())?,
            depth: 0,
            children: Vec::new(),
        });
        let mut i = 0;
        while i < nodes.len() {
            if nodes[i].depth < horizon {
                for s in 0..alphabet.size() {
                    let id = nodes.len();
                    let (b, r) = match &alphabet {
                        Alphabet::Bits => {
                            let mut v = seqs_b[i].clone();
                            v.push(s == 1);
                            seqs_b.push(v.clone());
                            (Some(v), None)
                        }
                        Alphabet::Reals(vals) => {
                            let mut v = seqs_r[i].clone();
                            v.push(vals[s]);
                            seqs_r.push(v.clone());
                            (None, Some(v))
                        }
                    };
                    let depth = nodes[i].depth + 1;
                    nodes.push(Node {
                        evidence: build(b, r)?,
                        depth,
                        children: Vec::new(),
                    });
                    nodes[i].children.push(id);
                }
            }
            i += 1;
        }

        let regions = nodes
            .iter()
            .map(|n| rule.region(&n.evidence))
            .collect::<Result<Vec<_>>>()?;
        let membership = regions
            .iter()
            .map(|r| {
                grid.iter()
                    .map(|&t| r.contains_point(t))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Frame {
            pep_radius: 1,
            grid,
            alphabet,
            horizon,
            rule,
            semantics: Semantics::default(),
            nodes,
            regions,
            membership,
        })
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> Self {
        self.semantics = semantics;
        self
    }

    /// Half-width, in grid steps, of the open cells used as neighbourhoods in
    /// [`Frame::check_pep`].
    pub fn with_pep_radius(mut self, radius: usize) -> Self {
        self.pep_radius = radius.max(1);
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn rule(&self) -> &ConfidenceRule {
        &self.rule
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    pub fn pep_radius(&self) -> usize {
        self.pep_radius
    }

    pub fn evidence_nodes(&self) -> impl Iterator<Item = &Evidence> {
        self.nodes.iter().map(|n| &n.evidence)
    }

    pub fn world_count(&self) -> usize {
        self.grid.len() * self.nodes.len()
    }

    /// Every world, evidence-major.
    pub fn worlds(&self) -> Vec<World> {
        self.nodes
            .iter()
            .flat_map(|n| {
                self.grid.iter().map(move |&theta| World {
                    theta,
                    evidence: n.evidence.clone(),
                })
            })
            .collect()
    }

    fn locate(&self, w: &World) -> Result<(usize, usize)> {
        let g = self
            .grid
            .iter()
            .position(|&t| t == w.theta)
            .ok_or_else(|| {
                Error::InvalidParameter(format!("theta {} is not on the frame grid", w.theta))
            })?;
        let n = self
            .nodes
            .iter()
            .position(|n| n.evidence.same_observations(&w.evidence))
            .ok_or_else(|| {
                Error::InvalidEvidence(format!(
                    "evidence {} is not in the frame",
                    evidence_label(&w.evidence)
                ))
            })?;
        Ok((n, g))
    }

    pub fn region_at(&self, w: &World) -> Result<&RegionSet> {
        Ok(&self.regions[self.locate(w)?.0])
    }

    /// Grid worlds `v` with `θ_v ∈ c(E_w)`, any evidence.
    pub fn accessible_c(&self, w: &World) -> Result<Vec<World>> {
        let (n, _) = self.locate(w)?;
        Ok(self
            .nodes
            .iter()
            .flat_map(|node| {
                self.grid
                    .iter()
                    .zip(&self.membership[n])
                    .filter(|(_, &m)| m)
                    .map(move |(&theta, _)| World {
                        theta,
                        evidence: node.evidence.clone(),
                    })
            })
            .collect())
    }

    /// Worlds whose evidence extends `E_w`, any θ.
    pub fn accessible_e(&self, w: &World) -> Result<Vec<World>> {
        let (n, _) = self.locate(w)?;
        Ok(self
            .subtree(n)
            .into_iter()
            .flat_map(|m| {
                let e = &self.nodes[m].evidence;
                self.grid.iter().map(move |&theta| World {
                    theta,
                    evidence: e.clone(),
                })
            })
            .collect())
    }

    fn subtree(&self, n: usize) -> Vec<usize> {
        let mut out = vec![n];
        let mut i = 0;
        while i < out.len() {
            out.extend(&self.nodes[out[i]].children);
            i += 1;
        }
        out
    }

    /// OR (or AND) of a per-node flag over each node's subtree.
    fn subtree_fold(&self, flag: Vec<bool>, any: bool) -> Vec<bool> {
        let mut acc = flag;
        // Children always have larger ids than their parent.
        for i in (0..self.nodes.len()).rev() {
            for &c in &self.nodes[i].children {
                acc[i] = if any {
                    acc[i] || acc[c]
                } else {
                    acc[i] && acc[c]
                };
            }
        }
        acc
    }

    fn check_atoms(&self, phi: &ModalFormula) -> Result<()> {
        let mut atoms = Vec::new();
        phi.atoms(&mut atoms);
        for (_, h) in atoms {
            if h.ambient() != self.rule.ambient() {
                return Err(crate::region::RegionError::AmbientMismatch {
                    left: h.ambient(),
                    right: self.rule.ambient(),
                }
                .into());
            }
        }
        Ok(())
    }

    fn table(&self, phi: &ModalFormula, memo: &mut HashMap<String, Table>) -> Result<Table> {
        let key = phi.to_string();
        if let Some(t) = memo.get(&key) {
            return Ok(t.clone());
        }
        let t = match self.semantics {
            Semantics::Grid => Table::Grid(self.grid_table(phi, memo)?),
            Semantics::Continuum => Table::Continuum(self.continuum_table(phi, memo)?),
        };
        memo.insert(key, t.clone());
        Ok(t)
    }

    fn grid_sub(
        &self,
        phi: &ModalFormula,
        memo: &mut HashMap<String, Table>,
    ) -> Result<Vec<Vec<bool>>> {
        match self.table(phi, memo)? {
            Table::Grid(t) => Ok(t),
            Table::Continuum(_) => unreachable!(),
        }
    }

    fn continuum_sub(
        &self,
        phi: &ModalFormula,
        memo: &mut HashMap<String, Table>,
    ) -> Result<Vec<RegionSet>> {
        match self.table(phi, memo)? {
            Table::Continuum(t) => Ok(t),
            Table::Grid(_) => unreachable!(),
        }
    }

    fn grid_table(
        &self,
        phi: &ModalFormula,
        memo: &mut HashMap<String, Table>,
    ) -> Result<Vec<Vec<bool>>> {
        let (nn, ng) = (self.nodes.len(), self.grid.len());
        let constant = |per_node: Vec<bool>| {
            per_node
                .into_iter()
                .map(|b| vec![b; ng])
                .collect::<Vec<_>>()
        };
        Ok(match phi {
            ModalFormula::Atom { h, .. } => {
                let row = self
                    .grid
                    .iter()
                    .map(|&t| h.contains_point(t))
                    .collect::<Result<Vec<_>, _>>()?;
                vec![row; nn]
            }
            ModalFormula::Not(a) => {
                let mut t = self.grid_sub(a, memo)?;
                t.iter_mut().flatten().for_each(|b| *b = !*b);
                t
            }
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) => {
                let is_and = matches!(phi, ModalFormula::And(..));
                let mut ta = self.grid_sub(a, memo)?;
                let tb = self.grid_sub(b, memo)?;
                for (x, y) in ta.iter_mut().flatten().zip(tb.iter().flatten()) {
                    *x = if is_and { *x && *y } else { *x || *y };
                }
                ta
            }
            ModalFormula::DiamondC(a) | ModalFormula::BoxC(a) => {
                let diamond = matches!(phi, ModalFormula::DiamondC(_));
                let t = self.grid_sub(a, memo)?;
                // Whether the body holds at (θ_g, E) for some (every) E.
                let by_theta: Vec<bool> = (0..ng)
                    .map(|g| {
                        if diamond {
                            t.iter().any(|r| r[g])
                        } else {
                            t.iter().all(|r| r[g])
                        }
                    })
                    .collect();
                let per_node = self
                    .membership
                    .iter()
                    .map(|m| {
                        let mut reach = m
                            .iter()
                            .zip(&by_theta)
                            .filter(|(&acc, _)| acc)
                            .map(|(_, &v)| v);
                        if diamond {
                            reach.any(|v| v)
                        } else {
                            reach.all(|v| v)
                        }
                    })
                    .collect();
                constant(per_node)
            }
            ModalFormula::DiamondE(a) | ModalFormula::BoxE(a) => {
                let any = matches!(phi, ModalFormula::DiamondE(_));
                let t = self.grid_sub(a, memo)?;
                let flag = t
                    .iter()
                    .map(|r| {
                        if any {
                            r.iter().any(|&b| b)
                        } else {
                            r.iter().all(|&b| b)
                        }
                    })
                    .collect();
                constant(self.subtree_fold(flag, any))
            }
        })
    }

    fn continuum_table(
        &self,
        phi: &ModalFormula,
        memo: &mut HashMap<String, Table>,
    ) -> Result<Vec<RegionSet>> {
        let ambient = self.rule.ambient();
        let constant = |per_node: Vec<bool>| {
            per_node
                .into_iter()
                .map(|b| {
                    if b {
                        RegionSet::full(ambient)
                    } else {
                        RegionSet::empty(ambient)
                    }
                })
                .collect::<Vec<_>>()
        };
        Ok(match phi {
            ModalFormula::Atom { h, .. } => vec![h.clone(); self.nodes.len()],
            ModalFormula::Not(a) => self
                .continuum_sub(a, memo)?
                .iter()
                .map(RegionSet::complement)
                .collect(),
            ModalFormula::And(a, b) | ModalFormula::Or(a, b) => {
                let is_and = matches!(phi, ModalFormula::And(..));
                let ta = self.continuum_sub(a, memo)?;
                let tb = self.continuum_sub(b, memo)?;
                ta.iter()
                    .zip(&tb)
                    .map(|(x, y)| {
                        if is_and {
                            x.intersection(y)
                        } else {
                            x.union(y)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
            ModalFormula::DiamondC(a) => {
                let t = self.continuum_sub(a, memo)?;
                let reach = t
                    .iter()
                    .try_fold(RegionSet::empty(ambient), |acc, r| acc.union(r))?;
                constant(
                    self.regions
                        .iter()
                        .map(|c| c.intersects(&reach))
                        .collect::<Result<_, _>>()?,
                )
            }
            ModalFormula::BoxC(a) => {
                let t = self.continuum_sub(a, memo)?;
                let safe = t
                    .iter()
                    .try_fold(RegionSet::full(ambient), |acc, r| acc.intersection(r))?;
                constant(
                    self.regions
                        .iter()
                        .map(|c| safe.contains(c))
                        .collect::<Result<_, _>>()?,
                )
            }
            ModalFormula::DiamondE(a) => {
                let t = self.continuum_sub(a, memo)?;
                constant(self.subtree_fold(t.iter().map(|r| !r.is_empty()).collect(), true))
            }
            ModalFormula::BoxE(a) => {
                let t = self.continuum_sub(a, memo)?;
                constant(self.subtree_fold(t.iter().map(RegionSet::is_full).collect(), false))
            }
        })
    }

    /// Truth value of `phi` at every world, `[node][grid]` in
    /// [`Frame::worlds`] order.
    pub fn evaluate(&self, phi: &ModalFormula) -> Result<Vec<Vec<bool>>> {
        self.check_atoms(phi)?;
        let mut memo = HashMap::new();
        match self.table(phi, &mut memo)? {
            Table::Grid(t) => Ok(t),
            Table::Continuum(t) => t
                .iter()
                .map(|r| {
                    self.grid
                        .iter()
                        .map(|&x| Ok(r.contains_point(x)?))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn satisfies(&self, w: &World, phi: &ModalFormula) -> Result<bool> {
        let (n, g) = self.locate(w)?;
        Ok(self.evaluate(phi)?[n][g])
    }

    pub fn model_check(&self, phi: &ModalFormula) -> Result<ModelCheckReport> {
        let table = self.evaluate(phi)?;
        let mut satisfying = 0;
        let mut counterexamples = Vec::new();
        for (n, row) in table.iter().enumerate() {
            for (g, &ok) in row.iter().enumerate() {
                if ok {
                    satisfying += 1;
                } else if counterexamples.len() < 10 {
                    counterexamples.push((self.grid[g], evidence_label(&self.nodes[n].evidence)));
                }
            }
        }
        Ok(ModelCheckReport {
            formula: phi.to_string(),
            semantics: self.semantics,
            worlds_total: self.world_count(),
            worlds_satisfying: satisfying,
            counterexamples,
        })
    }

    /// Open neighbourhood `(θ_{i−r}, θ_{i+r})` of grid point `i`, relative to
    /// the ambient: a side that runs off the grid extends to the ambient
    /// boundary.
    pub fn pep_cell(&self, i: usize) -> Interval {
        let ambient = self.rule.ambient();
        let mut sorted = self.grid.clone();
        sorted.sort_by(f64::total_cmp);
        let pos = sorted
            .iter()
            .position(|&t| t == self.grid[i])
            .expect("grid point");
        let r = self.pep_radius;
        let lo = match pos.checked_sub(r) {
            Some(j) => Endpoint::new(sorted[j], false).expect("finite"),
            None => ambient.lo(),
        };
        let hi = match sorted.get(pos + r) {
            Some(&t) => Endpoint::new(t, false).expect("finite"),
            None => ambient.hi(),
        };
        Interval::new(lo, hi).expect("cell contains its centre")
    }

    /// PEP failures at grid resolution for evidence of length at most
    /// `max_depth`.
    pub fn check_pep_to_depth(&self, max_depth: usize) -> Result<Vec<PepCounterexample>> {
        let ambient = self.rule.ambient();
        let cells: Vec<RegionSet> = (0..self.grid.len())
            .map(|i| RegionSet::interval(ambient, self.pep_cell(i)))
            .collect::<Result<_, _>>()?;
        // fits[node][g]: θ_g ∈ c(E_node) ⊆ cell(g)
        let fits: Vec<Vec<bool>> = self
            .regions
            .iter()
            .zip(&self.membership)
            .map(|(r, m)| {
                cells
                    .iter()
                    .zip(m)
                    .map(|(cell, &inside)| Ok(inside && cell.contains(r)?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        for g in 0..self.grid.len() {
            let witnessed = self.subtree_fold(fits.iter().map(|row| row[g]).collect(), true);
            for (n, node) in self.nodes.iter().enumerate() {
                if node.depth <= max_depth && !witnessed[n] {
                    out.push(PepCounterexample {
                        theta: self.grid[g],
                        cell: self.pep_cell(g),
                        evidence: node.evidence.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// PEP failures over the whole frame. Evidence at the horizon has no
    /// proper extensions, so a frame is PEP-clean only when every horizon
    /// region already fits its cell.
    pub fn check_pep(&self) -> Result<Vec<PepCounterexample>> {
        self.check_pep_to_depth(self.horizon)
    }

    /// Largest depth `d` such that PEP holds for all evidence of length at
    /// most `d`, or `None` when it fails already at the empty sequence.
    pub fn pep_certified_depth(&self) -> Result<Option<usize>> {
        let bad = self.check_pep()?;
        let first_bad = bad.iter().map(|c| c.evidence.len()).min();
        Ok(match first_bad {
            None => Some(self.horizon),
            Some(0) => None,
            Some(d) => Some(d - 1),
        })
    }

    /// Depth of each world's evidence, `[node]`.
    pub fn node_depths(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.depth).collect()
    }
}

/// JSON description of a frame plus its named atoms.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameConfig {
    pub grid: Vec<f64>,
    pub alphabet: Alphabet,
    pub horizon: usize,
    pub rule: ConfidenceRule,
    #[serde(default)]
    pub atoms: HashMap<String, RegionSet>,
    #[serde(default)]
    pub semantics: Semantics,
    #[serde(default)]
    pub pep_radius: Option<usize>,
}

impl FrameConfig {
    pub fn build(&self) -> Result<Frame> {
        let f = Frame::new(
            self.grid.clone(),
            self.alphabet.clone(),
            self.horizon,
            self.rule.clone(),
        )?
        .with_semantics(self.semantics);
        Ok(match self.pep_radius {
            Some(r) => f.with_pep_radius(r),
            None => f,
        })
    }
}
