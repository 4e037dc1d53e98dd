//! Acyclic boolean circuits: evaluation, size, levels, strict layering, slices.

use std::collections::{BTreeMap, BinaryHeap, HashMap};
use std::cmp::Reverse;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{NvError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    Not,
    And,
    Or,
    Fork,
    Id,
    Fredkin,
}

impl GateKind {
    pub fn fan_in(self) -> usize {
        match self {
            GateKind::And | GateKind::Or => 2,
            GateKind::Fredkin => 3,
            _ => 1,
        }
    }

    pub fn fan_out(self) -> usize {
        match self {
            GateKind::Fork => 2,
            GateKind::Fredkin => 3,
            _ => 1,
        }
    }

    pub fn eval(self, x: &[bool]) -> Vec<bool> {
        match self {
            GateKind::Not => vec![!x[0]],
            GateKind::And => vec![x[0] && x[1]],
            GateKind::Or => vec![x[0] || x[1]],
            GateKind::Fork => vec![x[0], x[0]],
            GateKind::Id => vec![x[0]],
            GateKind::Fredkin => {
                if x[0] {
                    vec![x[0], x[2], x[1]]
                } else {
                    x.to_vec()
                }
            }
        }
    }

    fn name(self) -> &'static str {
        match self {
            GateKind::Not => "NOT",
            GateKind::And => "AND",
            GateKind::Or => "OR",
            GateKind::Fork => "FORK",
            GateKind::Id => "ID",
            GateKind::Fredkin => "FREDKIN",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A wire source: a circuit input (0-based) or an output port of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Wire {
    Input(usize),
    Port(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub inputs: Vec<Wire>,
}

/// A validated circuit with fan-out exactly one on every wire.
///
/// Gates are kept in topological order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    m: usize,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
    raw_size: usize,
}

impl Circuit {
    /// Validates and topologically orders a circuit in normal form.
    pub fn new(m: usize, gates: Vec<Gate>, outputs: Vec<Wire>) -> Result<Self> {
        let mut c = Self { m, gates, outputs, raw_size: 0 };
        c.validate()?;
        c.topo_sort()?;
        c.raw_size = c.size();
        Ok(c)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.outputs.len()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    fn invalid(msg: impl Into<String>) -> NvError {
        NvError::InvalidCircuit(msg.into())
    }

    fn validate(&self) -> Result<()> {
        if self.outputs.is_empty() {
            return Err(Self::invalid("circuit has no outputs"));
        }
        let mut uses: HashMap<Wire, usize> = HashMap::new();
        for (gi, g) in self.gates.iter().enumerate() {
            if g.inputs.len() != g.kind.fan_in() {
                return Err(Self::invalid(format!(
                    "gate {} ({}) has {} inputs, expected {}",
                    g.id,
                    g.kind,
                    g.inputs.len(),
                    g.kind.fan_in()
                )));
            }
            for w in &g.inputs {
                self.check_wire(*w, Some(gi))?;
                *uses.entry(*w).or_default() += 1;
            }
        }
        for w in &self.outputs {
            self.check_wire(*w, None)?;
            *uses.entry(*w).or_default() += 1;
        }
        for i in 0..self.m {
            match uses.get(&Wire::Input(i)).copied().unwrap_or(0) {
                0 => return Err(Self::invalid(format!("input x{} is unused", i + 1))),
                1 => {}
                _ => return Err(Self::invalid(format!("input x{} has fan-out > 1", i + 1))),
            }
        }
        for (gi, g) in self.gates.iter().enumerate() {
            for p in 0..g.kind.fan_out() {
                match uses.get(&Wire::Port(gi, p)).copied().unwrap_or(0) {
                    0 => return Err(Self::invalid(format!("output port {} of gate {} is unused", p, g.id))),
                    1 => {}
                    _ => return Err(Self::invalid(format!("port {} of gate {} has fan-out > 1", p, g.id))),
                }
            }
        }
        Ok(())
    }

    fn check_wire(&self, w: Wire, consumer: Option<usize>) -> Result<()> {
        match w {
            Wire::Input(i) if i < self.m => Ok(()),
            Wire::Input(i) => Err(Self::invalid(format!("input x{} out of range", i + 1))),
            Wire::Port(g, p) => {
                let gate = self.gates.get(g).ok_or_else(|| Self::invalid("dangling gate reference"))?;
                if p >= gate.kind.fan_out() {
                    return Err(Self::invalid(format!("gate {} has no port {}", gate.id, p)));
                }
                if consumer == Some(g) {
                    return Err(Self::invalid(format!("gate {} feeds itself", gate.id)));
                }
                Ok(())
            }
        }
    }

    /// Stable topological sort; fails on cycles.
    fn topo_sort(&mut self) -> Result<()> {
        let count = self.gates.len();
        let mut indeg = vec![0usize; count];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (gi, g) in self.gates.iter().enumerate() {
            for w in &g.inputs {
                if let Wire::Port(src, _) = w {
                    indeg[gi] += 1;
                    succ[*src].push(gi);
                }
            }
        }
        let mut heap: BinaryHeap<Reverse<usize>> =
            (0..count).filter(|&g| indeg[g] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(count);
        while let Some(Reverse(g)) = heap.pop() {
            order.push(g);
            for &s in &succ[g] {
                indeg[s] -= 1;
                if indeg[s] == 0 {
                    heap.push(Reverse(s));
                }
            }
        }
        if order.len() != count {
            return Err(Self::invalid("circuit has a cycle"));
        }
        let mut new_index = vec![0; count];
        for (new, &old) in order.iter().enumerate() {
            new_index[old] = new;
        }
        let remap = |w: Wire| match w {
            Wire::Port(g, p) => Wire::Port(new_index[g], p),
            w => w,
        };
        let mut gates: Vec<Gate> = order.iter().map(|&g| self.gates[g].clone()).collect();
        for g in &mut gates {
            for w in &mut g.inputs {
                *w = remap(*w);
            }
        }
        self.outputs = self.outputs.iter().map(|&w| remap(w)).collect();
        self.gates = gates;
        Ok(())
    }

    /// Number of edges: gate fan-ins plus output wires.
    pub fn size(&self) -> usize {
        self.gates.iter().map(|g| g.kind.fan_in()).sum::<usize>() + self.n()
    }

    /// Size of the circuit as written, before fan-in/fan-out normalization.
    pub fn raw_size(&self) -> usize {
        self.raw_size
    }

    pub fn evaluate(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.m {
            return Err(NvError::WidthMismatch { expected: self.m, got: x.len() });
        }
        let mut vals: Vec<Vec<bool>> = Vec::with_capacity(self.gates.len());
        let read = |vals: &Vec<Vec<bool>>, w: Wire| match w {
            Wire::Input(i) => x[i],
            Wire::Port(g, p) => vals[g][p],
        };
        for g in &self.gates {
            let ins: Vec<bool> = g.inputs.iter().map(|&w| read(&vals, w)).collect();
            vals.push(g.kind.eval(&ins));
        }
        Ok(self.outputs.iter().map(|&w| read(&vals, w)).collect())
    }

    /// All `2^m` outputs, indexed by the input read as a big-endian integer.
    pub fn truth_table(&self) -> Result<Vec<Vec<bool>>> {
        if self.m > 24 {
            return Err(NvError::TooLarge(format!("truth table of a circuit with m = {}", self.m)));
        }
        let m = self.m;
        let row = |i: u64| self.evaluate(&index_bits(i, m)).expect("width");
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            Ok((0..1u64 << m).into_par_iter().map(row).collect())
        }
        #[cfg(not(feature = "parallel"))]
        {
            Ok((0..1u64 << m).map(row).collect())
        }
    }

    fn wire_level(&self, levels: &[usize], w: Wire) -> usize {
        match w {
            Wire::Input(_) => 0,
            Wire::Port(g, _) => levels[g],
        }
    }

    /// Gate levels (longest path from an input) and the circuit depth.
    pub fn levels(&self) -> (Vec<usize>, usize) {
        let mut levels = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let l = g.inputs.iter().map(|&w| self.wire_level(&levels, w)).max().unwrap_or(0) + 1;
            levels.push(l);
        }
        let depth = levels.iter().copied().max().unwrap_or(0);
        (levels, depth)
    }

    /// Every gate reads only the previous level and every output reads the last.
    pub fn is_strict(&self) -> bool {
        let (levels, depth) = self.levels();
        depth >= 1
            && self.gates.iter().zip(&levels).all(|(g, &l)| {
                g.inputs.iter().all(|&w| self.wire_level(&levels, w) + 1 == l)
            })
            && self.outputs.iter().all(|&w| self.wire_level(&levels, w) == depth)
    }

    /// Inserts identity gates so that the circuit becomes strictly layered.
    pub fn strictify(&self) -> Circuit {
        if self.is_strict() {
            return self.clone();
        }
        let (levels, depth) = self.levels();
        let depth = depth.max(1);
        let mut gates = self.gates.clone();
        let mut fresh = 0usize;
        let mut chain = |gates: &mut Vec<Gate>, mut w: Wire, len: usize| {
            for _ in 0..len {
                fresh += 1;
                gates.push(Gate { id: format!("_id{fresh}"), kind: GateKind::Id, inputs: vec![w] });
                w = Wire::Port(gates.len() - 1, 0);
            }
            w
        };
        for gi in 0..self.gates.len() {
            for slot in 0..self.gates[gi].inputs.len() {
                let w = self.gates[gi].inputs[slot];
                let gap = levels[gi] - 1 - self.wire_level(&levels, w);
                if gap > 0 {
                    let nw = chain(&mut gates, w, gap);
                    gates[gi].inputs[slot] = nw;
                }
            }
        }
        let mut outputs = self.outputs.clone();
        for o in outputs.iter_mut() {
            let gap = depth - self.wire_level(&levels, *o);
            if gap > 0 {
                *o = chain(&mut gates, *o, gap);
            }
        }
        let mut c = Circuit::new(self.m, gates, outputs).expect("strictify preserves validity");
        c.raw_size = self.raw_size;
        c
    }

    /// The per-level decomposition of a strictly layered circuit.
    pub fn slices(&self) -> Result<Vec<Slice>> {
        if !self.is_strict() {
            return Err(NvError::NotStrict);
        }
        let (levels, depth) = self.levels();
        let mut consumer_output: HashMap<Wire, usize> = HashMap::new();
        for (j, &w) in self.outputs.iter().enumerate() {
            consumer_output.insert(w, j);
        }
        let mut prev: Vec<Wire> = (0..self.m).map(Wire::Input).collect();
        let mut out = Vec::with_capacity(depth);
        for level in 1..=depth {
            let pos: HashMap<Wire, usize> = prev.iter().enumerate().map(|(i, &w)| (w, i)).collect();
            let mut gates: Vec<usize> = (0..self.gates.len()).filter(|&g| levels[g] == level).collect();
            if level == depth {
                gates.sort_by_key(|&g| {
                    (0..self.gates[g].kind.fan_out()).map(|p| consumer_output[&Wire::Port(g, p)]).min()
                });
            } else {
                gates.sort_by_key(|&g| self.gates[g].inputs.iter().map(|w| pos[w]).min());
            }
            let input_permutation: Vec<usize> =
                gates.iter().flat_map(|&g| self.gates[g].inputs.iter().map(|w| pos[w])).collect();
            if input_permutation.len() != prev.len() {
                return Err(NvError::InvalidSlice(format!("level {level} does not consume every wire")));
            }
            let next: Vec<Wire> = gates
                .iter()
                .flat_map(|&g| (0..self.gates[g].kind.fan_out()).map(move |p| Wire::Port(g, p)))
                .collect();
            let output_permutation = if level == depth {
                let npos: HashMap<Wire, usize> = next.iter().enumerate().map(|(i, &w)| (w, i)).collect();
                self.outputs.iter().map(|w| npos[w]).collect()
            } else {
                (0..next.len()).collect()
            };
            let size = prev.len() + if level == depth { next.len() } else { 0 };
            out.push(Slice {
                input_width: prev.len(),
                output_width: next.len(),
                input_permutation,
                gates: gates.iter().map(|&g| self.gates[g].kind).collect(),
                output_permutation,
                size,
            });
            prev = next;
        }
        Ok(out)
    }

    /// A reproducible random circuit with `gate_budget` gates over {NOT, AND, OR, FORK, ID}.
    pub fn random(m: usize, gate_budget: usize, seed: u64) -> Circuit {
        assert!(m >= 1, "random circuits need at least one input");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut open: Vec<Wire> = (0..m).map(Wire::Input).collect();
        let mut gates: Vec<Gate> = Vec::new();
        for gi in 0..gate_budget {
            let mut kinds = vec![GateKind::Not, GateKind::Fork, GateKind::Id];
            if open.len() >= 2 {
                kinds.extend([GateKind::And, GateKind::Or, GateKind::And, GateKind::Or]);
            }
            let kind = *kinds.choose(&mut rng).unwrap();
            let mut inputs = Vec::new();
            for _ in 0..kind.fan_in() {
                let i = rng.gen_range(0..open.len());
                inputs.push(open.swap_remove(i));
            }
            gates.push(Gate { id: format!("g{}", gi + 1), kind, inputs });
            open.extend((0..kind.fan_out()).map(|p| Wire::Port(gi, p)));
        }
        open.shuffle(&mut rng);
        Circuit::new(m, gates, open).expect("random circuit is valid")
    }

    /// A random network of `gates` Fredkin gates on `wires` wires.
    pub fn random_fredkin(wires: usize, gates: usize, seed: u64) -> Circuit {
        assert!(wires >= 3, "Fredkin networks need at least three wires");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cur: Vec<Wire> = (0..wires).map(Wire::Input).collect();
        let mut out = Vec::new();
        for gi in 0..gates {
            let mut idx: Vec<usize> = (0..wires).collect();
            idx.shuffle(&mut rng);
            let triple = [idx[0], idx[1], idx[2]];
            out.push(Gate {
                id: format!("f{}", gi + 1),
                kind: GateKind::Fredkin,
                inputs: triple.iter().map(|&i| cur[i]).collect(),
            });
            for (p, &i) in triple.iter().enumerate() {
                cur[i] = Wire::Port(gi, p);
            }
        }
        Circuit::new(wires, out, cur).expect("fredkin network is valid")
    }

    fn wire_ref(&self, w: Wire) -> String {
        match w {
            Wire::Input(i) => format!("x{}", i + 1),
            Wire::Port(g, p) => {
                let gate = &self.gates[g];
                if gate.kind.fan_out() == 1 {
                    gate.id.clone()
                } else {
                    format!("{}.{}", gate.id, p)
                }
            }
        }
    }

    pub fn to_json(&self) -> CircuitJson {
        CircuitJson {
            m: self.m,
            n: self.n(),
            gates: self
                .gates
                .iter()
                .map(|g| GateJson {
                    id: g.id.clone(),
                    kind: g.kind,
                    inputs: g.inputs.iter().map(|&w| self.wire_ref(w)).collect(),
                })
                .collect(),
            outputs: self.outputs.iter().map(|&w| self.wire_ref(w)).collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Circuit> {
        let j: CircuitJson = serde_json::from_str(s)?;
        Circuit::from_json(&j)
    }

    /// Parses the file form, normalizing fan-in above 2 and fan-out above 1.
    pub fn from_json(j: &CircuitJson) -> Result<Circuit> {
        let mut ids: HashMap<&str, usize> = HashMap::new();
        for (i, g) in j.gates.iter().enumerate() {
            if g.id.is_empty() || g.id.starts_with('x') && g.id[1..].chars().all(|c| c.is_ascii_digit()) {
                return Err(Self::invalid(format!("gate id {:?} is reserved", g.id)));
            }
            if ids.insert(g.id.as_str(), i).is_some() {
                return Err(Self::invalid(format!("duplicate gate id {:?}", g.id)));
            }
        }
        let parse_ref = |r: &str| -> Result<Wire> {
            if let Some(num) = r.strip_prefix('x') {
                if let Ok(i) = num.parse::<usize>() {
                    if i == 0 || i > j.m {
                        return Err(Self::invalid(format!("input {r} out of range")));
                    }
                    return Ok(Wire::Input(i - 1));
                }
            }
            let (id, port) = match r.rsplit_once('.') {
                Some((id, p)) if ids.contains_key(id) => {
                    (id, p.parse::<usize>().map_err(|_| Self::invalid(format!("bad port in {r:?}")))?)
                }
                _ => (r, 0),
            };
            let g = *ids.get(id).ok_or_else(|| Self::invalid(format!("unknown wire {r:?}")))?;
            Ok(Wire::Port(g, port))
        };

        // Gates as written, with AND/OR of fan-in above 2 expanded into chains.
        let mut gates: Vec<Gate> = Vec::new();
        let mut index_of: Vec<usize> = Vec::with_capacity(j.gates.len());
        let mut pending: Vec<(usize, Vec<Wire>)> = Vec::new();
        for g in &j.gates {
            let inputs = g.inputs.iter().map(|r| parse_ref(r)).collect::<Result<Vec<_>>>()?;
            index_of.push(gates.len());
            pending.push((gates.len(), inputs.clone()));
            gates.push(Gate { id: g.id.clone(), kind: g.kind, inputs });
        }
        let remap = |w: Wire, index_of: &[usize]| match w {
            Wire::Port(g, p) => Wire::Port(index_of[g], p),
            w => w,
        };
        let mut fresh = 0usize;
        for (gi, inputs) in pending {
            let kind = gates[gi].kind;
            let inputs: Vec<Wire> = inputs.into_iter().map(|w| remap(w, &index_of)).collect();
            if matches!(kind, GateKind::And | GateKind::Or) && inputs.len() > 2 {
                let mut acc = inputs[0];
                for &w in &inputs[1..inputs.len() - 1] {
                    fresh += 1;
                    gates.push(Gate { id: format!("_{}{}", gates[gi].id, fresh), kind, inputs: vec![acc, w] });
                    acc = Wire::Port(gates.len() - 1, 0);
                }
                gates[gi].inputs = vec![acc, *inputs.last().unwrap()];
            } else {
                gates[gi].inputs = inputs;
            }
        }
        let outputs = j.outputs.iter().map(|r| parse_ref(r)).collect::<Result<Vec<_>>>()?;
        let mut outputs: Vec<Wire> = outputs.into_iter().map(|w| remap(w, &index_of)).collect();
        if j.n != outputs.len() {
            return Err(Self::invalid(format!("n = {} but {} outputs listed", j.n, outputs.len())));
        }
        let raw_size = j.gates.iter().map(|g| g.inputs.len()).sum::<usize>() + outputs.len();

        // Fan-out normalization: a wire used u > 1 times feeds a chain of u-1 forks.
        let mut uses: BTreeMap<Wire, Vec<(Option<usize>, usize)>> = BTreeMap::new();
        for (gi, g) in gates.iter().enumerate() {
            for (s, &w) in g.inputs.iter().enumerate() {
                uses.entry(w).or_default().push((Some(gi), s));
            }
        }
        for (s, &w) in outputs.iter().enumerate() {
            uses.entry(w).or_default().push((None, s));
        }
        for (w, consumers) in uses {
            if consumers.len() < 2 {
                continue;
            }
            let mut src = w;
            for (ci, &(gate, slot)) in consumers.iter().enumerate() {
                let feed = if ci + 1 == consumers.len() {
                    src
                } else {
                    fresh += 1;
                    gates.push(Gate { id: format!("_fork{fresh}"), kind: GateKind::Fork, inputs: vec![src] });
                    let f = gates.len() - 1;
                    src = Wire::Port(f, 1);
                    Wire::Port(f, 0)
                };
                match gate {
                    Some(g) => gates[g].inputs[slot] = feed,
                    None => outputs[slot] = feed,
                }
            }
        }
        let mut c = Circuit::new(j.m, gates, outputs)?;
        c.raw_size = raw_size;
        Ok(c)
    }
}

/// The file form of a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub m: usize,
    pub n: usize,
    pub gates: Vec<GateJson>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateJson {
    pub id: String,
    #[serde(rename = "type")]
    pub kind: GateKind,
    pub inputs: Vec<String>,
}

/// One level of a strictly layered circuit.
///
/// The slice permutes its inputs (`permuted[p] = input[input_permutation[p]]`),
/// feeds consecutive runs of the permuted wires to its gates from left to
/// right, and finally reorders the gate outputs by `output_permutation`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub input_width: usize,
    pub output_width: usize,
    pub input_permutation: Vec<usize>,
    pub gates: Vec<GateKind>,
    pub output_permutation: Vec<usize>,
    /// Wires entering the slice, plus the circuit outputs for the last slice.
    pub size: usize,
}

impl Slice {
    pub fn evaluate(&self, x: &[bool]) -> Result<Vec<bool>> {
        if x.len() != self.input_width {
            return Err(NvError::WidthMismatch { expected: self.input_width, got: x.len() });
        }
        let permuted: Vec<bool> = self.input_permutation.iter().map(|&i| x[i]).collect();
        let mut pos = 0;
        let mut outs = Vec::with_capacity(self.output_width);
        for g in &self.gates {
            outs.extend(g.eval(&permuted[pos..pos + g.fan_in()]));
            pos += g.fan_in();
        }
        Ok(self.output_permutation.iter().map(|&i| outs[i]).collect())
    }

    pub fn check(&self) -> Result<()> {
        let fin: usize = self.gates.iter().map(|g| g.fan_in()).sum();
        let fout: usize = self.gates.iter().map(|g| g.fan_out()).sum();
        if fin != self.input_width || fout != self.output_width {
            return Err(NvError::InvalidSlice("widths do not match gate arities".into()));
        }
        if !is_permutation(&self.input_permutation, self.input_width)
            || !is_permutation(&self.output_permutation, self.output_width)
        {
            return Err(NvError::InvalidSlice("not a permutation".into()));
        }
        Ok(())
    }
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// Transpositions `(a, b)` (0-based positions) whose successive application
/// to a sequence `y` yields `[y[perm[0]], y[perm[1]], ...]`; at most `n - 1` of them.
pub fn permutation_transpositions(perm: &[usize]) -> Vec<(usize, usize)> {
    let mut cur: Vec<usize> = (0..perm.len()).collect();
    let mut where_is: Vec<usize> = (0..perm.len()).collect();
    let mut out = Vec::new();
    for p in 0..perm.len() {
        let q = where_is[perm[p]];
        if q != p {
            out.push((p, q));
            let (a, b) = (cur[p], cur[q]);
            cur.swap(p, q);
            where_is[a] = q;
            where_is[b] = p;
        }
    }
    out
}

/// Big-endian bits of `i` with width `m`.
pub fn index_bits(i: u64, m: usize) -> Vec<bool> {
    (0..m).map(|b| (i >> (m - 1 - b)) & 1 == 1).collect()
}

pub fn bits_to_string(b: &[bool]) -> String {
    b.iter().map(|&v| if v { '1' } else { '0' }).collect()
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.trim()
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(NvError::Parse(format!("bad bit {c:?}"))),
        })
        .collect()
}

/// Rewrites that preserve the input-output function.
pub mod rewrite {
    use super::*;

    fn consumers(c: &Circuit) -> Vec<(Option<usize>, usize)> {
        let mut out = Vec::new();
        for (gi, g) in c.gates.iter().enumerate() {
            out.extend((0..g.inputs.len()).map(|s| (Some(gi), s)));
        }
        out.extend((0..c.outputs.len()).map(|s| (None, s)));
        out
    }

    fn read(c: &Circuit, at: (Option<usize>, usize)) -> Wire {
        match at {
            (Some(g), s) => c.gates[g].inputs[s],
            (None, s) => c.outputs[s],
        }
    }

    fn write(gates: &mut [Gate], outputs: &mut [Wire], at: (Option<usize>, usize), w: Wire) {
        match at {
            (Some(g), s) => gates[g].inputs[s] = w,
            (None, s) => outputs[s] = w,
        }
    }

    /// Inserts a chain of gates of the given kinds on one edge.
    pub fn insert_on_edge(c: &Circuit, edge: usize, kinds: &[GateKind]) -> Circuit {
        let all = consumers(c);
        let at = all[edge % all.len()];
        let mut gates = c.gates.clone();
        let mut outputs = c.outputs.clone();
        let mut w = read(c, at);
        for k in kinds {
            let id = format!("_r{}", gates.len());
            gates.push(Gate { id, kind: *k, inputs: vec![w] });
            w = Wire::Port(gates.len() - 1, 0);
        }
        write(&mut gates, &mut outputs, at, w);
        Circuit::new(c.m, gates, outputs).expect("valid rewrite")
    }

    pub fn double_negation(c: &Circuit, edge: usize) -> Circuit {
        insert_on_edge(c, edge, &[GateKind::Not, GateKind::Not])
    }

    pub fn identity_insertion(c: &Circuit, edge: usize) -> Circuit {
        insert_on_edge(c, edge, &[GateKind::Id])
    }

    fn binary_gates(c: &Circuit) -> Vec<usize> {
        (0..c.gates.len()).filter(|&g| matches!(c.gates[g].kind, GateKind::And | GateKind::Or)).collect()
    }

    /// Swaps the inputs of an AND/OR gate, if there is one.
    pub fn commute(c: &Circuit, pick: usize) -> Option<Circuit> {
        let bin = binary_gates(c);
        let g = *bin.get(pick % bin.len().max(1))?;
        let mut gates = c.gates.clone();
        gates[g].inputs.swap(0, 1);
        Some(Circuit::new(c.m, gates, c.outputs.clone()).expect("valid rewrite"))
    }

    /// `a ∧ b = ¬(¬a ∨ ¬b)` and dually, applied to one AND/OR gate.
    pub fn de_morgan(c: &Circuit, pick: usize) -> Option<Circuit> {
        let bin = binary_gates(c);
        let g = *bin.get(pick % bin.len().max(1))?;
        let mut gates = c.gates.clone();
        let dual = if gates[g].kind == GateKind::And { GateKind::Or } else { GateKind::And };
        let [a, b] = [gates[g].inputs[0], gates[g].inputs[1]];
        let base = gates.len();
        gates.push(Gate { id: format!("_dm{base}a"), kind: GateKind::Not, inputs: vec![a] });
        gates.push(Gate { id: format!("_dm{base}b"), kind: GateKind::Not, inputs: vec![b] });
        gates.push(Gate {
            id: format!("_dm{base}c"),
            kind: dual,
            inputs: vec![Wire::Port(base, 0), Wire::Port(base + 1, 0)],
        });
        gates[g].kind = GateKind::Not;
        gates[g].inputs = vec![Wire::Port(base + 2, 0)];
        Some(Circuit::new(c.m, gates, c.outputs.clone()).expect("valid rewrite"))
    }

    /// A random sequence of function-preserving rewrites.
    pub fn random_equivalent(c: &Circuit, steps: usize, rng: &mut impl Rng) -> Circuit {
        let mut cur = c.clone();
        for _ in 0..steps {
            let edge = rng.gen_range(0..cur.size());
            let pick = rng.gen::<usize>();
            cur = match rng.gen_range(0..4) {
                0 => de_morgan(&cur, pick).unwrap_or_else(|| double_negation(&cur, edge)),
                1 => double_negation(&cur, edge),
                2 => commute(&cur, pick).unwrap_or_else(|| identity_insertion(&cur, edge)),
                _ => identity_insertion(&cur, edge),
            };
        }
        cur
    }

    /// A random local change: flip AND/OR, negate an edge, or swap two outputs.
    pub fn mutate(c: &Circuit, rng: &mut impl Rng) -> Circuit {
        let bin = binary_gates(c);
        match rng.gen_range(0..3) {
            0 if !bin.is_empty() => {
                let g = bin[rng.gen_range(0..bin.len())];
                let mut gates = c.gates.clone();
                gates[g].kind = if gates[g].kind == GateKind::And { GateKind::Or } else { GateKind::And };
                Circuit::new(c.m, gates, c.outputs.clone()).expect("valid mutation")
            }
            1 if c.n() >= 2 => {
                let mut outputs = c.outputs.clone();
                let i = rng.gen_range(0..outputs.len());
                let j = (i + 1 + rng.gen_range(0..outputs.len() - 1)) % outputs.len();
                outputs.swap(i, j);
                Circuit::new(c.m, c.gates.clone(), outputs).expect("valid mutation")
            }
            _ => insert_on_edge(c, rng.gen_range(0..c.size()), &[GateKind::Not]),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Circuit {
        Circuit::from_json_str(s).unwrap()
    }

    fn single(kind: &str, m: usize) -> Circuit {
        let ins: Vec<String> = (1..=m).map(|i| format!("\"x{i}\"")).collect();
        let n = match kind {
            "FORK" => 2,
            "FREDKIN" => 3,
            _ => 1,
        };
        let outs: Vec<String> = if n == 1 {
            vec!["\"g\"".into()]
        } else {
            (0..n).map(|p| format!("\"g.{p}\"")).collect()
        };
        let outs = format!("[{}]", outs.join(","));
        parse(&format!(
            r#"{{"m":{m},"n":{n},"gates":[{{"id":"g","type":"{kind}","inputs":[{}]}}],"outputs":{outs}}}"#,
            ins.join(",")
        ))
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(single("NOT", 1).evaluate(&[false]).unwrap(), vec![true]);
        assert_eq!(single("OR", 2).evaluate(&[true, false]).unwrap(), vec![true]);
        let f = single("FREDKIN", 3);
        assert_eq!(f.evaluate(&[true, false, true]).unwrap(), vec![true, true, false]);
        assert_eq!(f.evaluate(&[false, false, true]).unwrap(), vec![false, false, true]);
        assert!(matches!(f.evaluate(&[true]), Err(NvError::WidthMismatch { .. })));
    }

    #[test]
    fn sizes() {
        assert_eq!(single("NOT", 1).size(), 2);
        assert_eq!(single("AND", 2).size(), 3);
        assert_eq!(single("FREDKIN", 3).size(), 6);
    }

    #[test]
    fn normalization_of_fan_in_and_fan_out() {
        let c = parse(
            r#"{"m":3,"n":2,"gates":[{"id":"a","type":"AND","inputs":["x1","x2","x3"]}],
                "outputs":["a","a"]}"#,
        );
        assert_eq!(c.raw_size(), 5);
        assert_eq!(c.gates().iter().filter(|g| g.kind == GateKind::Fork).count(), 1);
        assert_eq!(c.gates().iter().filter(|g| g.kind == GateKind::And).count(), 2);
        for i in 0..8 {
            let x = index_bits(i, 3);
            let v = x.iter().all(|&b| b);
            assert_eq!(c.evaluate(&x).unwrap(), vec![v, v]);
        }
    }

    #[test]
    fn invalid_circuits() {
        let bad = [
            r#"{"m":2,"n":1,"gates":[{"id":"a","type":"NOT","inputs":["x1"]}],"outputs":["a"]}"#,
            r#"{"m":1,"n":1,"gates":[{"id":"a","type":"NOT","inputs":["b"]},{"id":"b","type":"NOT","inputs":["a"]}],"outputs":["x1"]}"#,
            r#"{"m":1,"n":1,"gates":[],"outputs":["x2"]}"#,
            r#"{"m":1,"n":2,"gates":[],"outputs":["x1"]}"#,
        ];
        for b in bad {
            assert!(Circuit::from_json_str(b).is_err(), "{b}");
        }
    }

    fn non_strict() -> Circuit {
        parse(
            r#"{"m":2,"n":1,"gates":[
                {"id":"n","type":"NOT","inputs":["x1"]},
                {"id":"f","type":"FORK","inputs":["n"]},
                {"id":"a","type":"AND","inputs":["f.0","x2"]},
                {"id":"o","type":"OR","inputs":["a","f.1"]}],
              "outputs":["o"]}"#,
        )
    }

    #[test]
    fn strictify_preserves_function() {
        let c = non_strict();
        assert!(!c.is_strict());
        let s = c.strictify();
        assert!(s.is_strict());
        assert_eq!(s.levels().1, c.levels().1);
        assert_eq!(s.truth_table().unwrap(), c.truth_table().unwrap());
        assert_eq!(s.strictify(), s);
    }

    #[test]
    fn slices_compose_to_circuit() {
        let s = non_strict().strictify();
        let slices = s.slices().unwrap();
        assert_eq!(slices.iter().map(|x| x.size).sum::<usize>(), s.size());
        for i in 0..4 {
            let x = index_bits(i, 2);
            let mut y = x.clone();
            for sl in &slices {
                sl.check().unwrap();
                y = sl.evaluate(&y).unwrap();
            }
            assert_eq!(y, s.evaluate(&x).unwrap());
        }
        assert_eq!(non_strict().slices(), Err(NvError::NotStrict));
        let one = single("NOT", 1).slices().unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].input_permutation, vec![0]);
    }

    #[test]
    fn transpositions_realize_permutation() {
        let perm = [2, 0, 3, 1, 4];
        let ts = permutation_transpositions(&perm);
        assert!(ts.len() < perm.len());
        let mut y: Vec<usize> = (0..5).collect();
        for (a, b) in ts {
            y.swap(a, b);
        }
        assert_eq!(y, perm);
    }

    #[test]
    fn random_circuits_are_reproducible() {
        let a = Circuit::random(4, 8, 7);
        assert_eq!(a, Circuit::random(4, 8, 7));
        assert_eq!(Circuit::from_json_str(&a.to_json_string()).unwrap(), a);
        for seed in 0..50 {
            let c = Circuit::random(3, 6, seed);
            let s = c.strictify();
            assert_eq!(s.truth_table().unwrap(), c.truth_table().unwrap());
        }
    }

    #[test]
    fn rewrites_preserve_function() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for seed in 0..30 {
            let c = Circuit::random(3, 5, seed);
            let e = rewrite::random_equivalent(&c, 4, &mut rng);
            assert_eq!(e.truth_table().unwrap(), c.truth_table().unwrap());
        }
        let c = single("AND", 2);
        let d = rewrite::de_morgan(&c, 0).unwrap();
        assert_eq!(d.truth_table().unwrap(), c.truth_table().unwrap());
    }

    #[test]
    fn fredkin_networks() {
        let c = Circuit::random_fredkin(4, 5, 1);
        assert_eq!(c.size(), 5 * 3 + 4);
        let tt = c.truth_table().unwrap();
        let mut rows: Vec<&Vec<bool>> = tt.iter().collect();
        rows.sort();
        rows.dedup();
        assert_eq!(rows.len(), 16);
    }
}
