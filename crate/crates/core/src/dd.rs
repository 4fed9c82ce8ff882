//! Canonical, hash-consed decision diagrams for matrix functions (DDMFs).
//!
//! A DDMF maps every assignment of the Boolean variables `x1 < x2 < ... < xn`
//! to a 2x2 unitary. Every node carries a variable, a weighted 1-edge and an
//! unweighted 0-edge; a handle ([`DdmfRef`]) is a root weight plus a root
//! node. Weights multiply the value of the child on the left:
//!
//! ```text
//! value(W, node)(a)   = W · value(node)(a)
//! value(node)(a)      = a[var] ? W1 · value(one)(a) : value(zero)(a)
//! value(terminal)(a)  = I
//! ```
//!
//! In canonical form the all-zeros path below any node evaluates to `I`, so
//! the root weight of a handle is the value at the all-zeros assignment and
//! the node is the left quotient by it. Together with the unique table that
//! makes `(weight, node)` a canonical key: two handles denote the same
//! function iff they compare equal.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

use crate::exact::{ArithError, MatrixNamer, Ring, Unitary2};

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DdError {
    #[error("handles belong to different managers")]
    ManagerMismatch,
    #[error("operand is not a Boolean matrix function")]
    NotBoolean,
    #[error("variable x{var} out of range 1..={num_vars}")]
    VariableOutOfRange { var: u32, num_vars: u32 },
    #[error("assignment of length {len} does not fix x{var}")]
    IncompleteAssignment { var: u32, len: usize },
    #[error("variable order violated: node x{var} above child x{child}")]
    VariableOrder { var: u32, child: u32 },
    #[error("node limit of {limit} exceeded")]
    NodeLimit { limit: usize },
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Identifier of an interned node. `NodeId::TERMINAL` is the `I` terminal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const TERMINAL: NodeId = NodeId(0);

    pub fn index(&self) -> usize {
        self.0 as usize
    }

    pub fn is_terminal(&self) -> bool {
        *self == Self::TERMINAL
    }
}

/// Identifier of an interned matrix within one manager.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatId(u32);

impl MatId {
    pub const IDENTITY: MatId = MatId(0);
    pub const NOT: MatId = MatId(1);

    fn is_classical(self) -> bool {
        self == Self::IDENTITY || self == Self::NOT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Edge {
    weight: MatId,
    node: NodeId,
}

impl Edge {
    const ONE: Edge = Edge {
        weight: MatId::IDENTITY,
        node: NodeId::TERMINAL,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct NodeKey {
    var: u32,
    one: Edge,
    zero: NodeId,
}

#[derive(Clone, Copy, Debug)]
struct Node {
    key: NodeKey,
    boolean: bool,
}

/// Handle to a canonical DDMF owned by a [`DdmfManager`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DdmfRef {
    manager: u32,
    edge: Edge,
}

impl DdmfRef {
    pub fn root(&self) -> NodeId {
        self.edge.node
    }

    pub fn root_weight_id(&self) -> MatId {
        self.edge.weight
    }
}

/// Unique table, matrix table and apply caches for one variable set.
pub struct DdmfManager {
    id: u32,
    ring: Ring,
    num_vars: u32,
    node_limit: Option<usize>,
    matrices: Vec<Unitary2>,
    matrix_ids: HashMap<Unitary2, MatId>,
    products: HashMap<(MatId, MatId), MatId>,
    adjoints: HashMap<MatId, MatId>,
    nodes: Vec<Node>,
    unique: HashMap<NodeKey, NodeId>,
    compose_cache: HashMap<(NodeId, Edge), Edge>,
    select_cache: HashMap<(Edge, Edge), Edge>,
}

impl DdmfManager {
    pub fn new(ring: Ring, num_vars: u32) -> Self {
        let identity = Unitary2::identity(ring);
        let not = Unitary2::not(ring);
        let mut matrix_ids = HashMap::new();
        matrix_ids.insert(identity.clone(), MatId::IDENTITY);
        matrix_ids.insert(not.clone(), MatId::NOT);
        let mut products = HashMap::new();
        products.insert((MatId::NOT, MatId::NOT), MatId::IDENTITY);
        let mut adjoints = HashMap::new();
        adjoints.insert(MatId::NOT, MatId::NOT);
        let terminal = Node {
            key: NodeKey {
                var: u32::MAX,
                one: Edge::ONE,
                zero: NodeId::TERMINAL,
            },
            boolean: true,
        };
        DdmfManager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            ring,
            num_vars,
            node_limit: None,
            matrices: vec![identity, not],
            matrix_ids,
            products,
            adjoints,
            nodes: vec![terminal],
            unique: HashMap::new(),
            compose_cache: HashMap::new(),
            select_cache: HashMap::new(),
        }
    }

    /// Caps the number of interned non-terminal nodes.
    pub fn with_node_limit(mut self, limit: Option<usize>) -> Self {
        self.node_limit = limit;
        self
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    /// Non-terminal nodes interned so far. Nodes are never freed, so this is
    /// also the peak.
    pub fn live_nodes(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn distinct_matrices(&self) -> usize {
        self.matrices.len()
    }

    pub fn matrix(&self, id: MatId) -> &Unitary2 {
        &self.matrices[id.0 as usize]
    }

    pub fn root_weight(&self, d: DdmfRef) -> &Unitary2 {
        self.matrix(d.edge.weight)
    }

    fn handle(&self, edge: Edge) -> DdmfRef {
        DdmfRef {
            manager: self.id,
            edge,
        }
    }

    fn own(&self, d: DdmfRef) -> Result<Edge, DdError> {
        if d.manager == self.id {
            Ok(d.edge)
        } else {
            Err(DdError::ManagerMismatch)
        }
    }

    fn intern_matrix(&mut self, m: Unitary2) -> Result<MatId, DdError> {
        if m.ring() != self.ring {
            return Err(ArithError::OrderMismatch {
                left: self.ring.order(),
                right: m.ring().order(),
            }
            .into());
        }
        if let Some(&id) = self.matrix_ids.get(&m) {
            return Ok(id);
        }
        let id = MatId(self.matrices.len() as u32);
        self.matrices.push(m.clone());
        self.matrix_ids.insert(m, id);
        Ok(id)
    }

    fn mat_mul(&mut self, a: MatId, b: MatId) -> MatId {
        if a == MatId::IDENTITY {
            return b;
        }
        if b == MatId::IDENTITY {
            return a;
        }
        if let Some(&p) = self.products.get(&(a, b)) {
            return p;
        }
        let prod = self.matrix(a) * self.matrix(b);
        let id = self
            .intern_matrix(prod)
            .expect("interned matrices share the manager's ring");
        self.products.insert((a, b), id);
        id
    }

    fn mat_adjoint(&mut self, a: MatId) -> MatId {
        if a == MatId::IDENTITY {
            return a;
        }
        if let Some(&p) = self.adjoints.get(&a) {
            return p;
        }
        let adj = self.matrix(a).adjoint();
        let id = self
            .intern_matrix(adj)
            .expect("interned matrices share the manager's ring");
        self.adjoints.insert(a, id);
        self.adjoints.insert(id, a);
        id
    }

    fn var_of(&self, n: NodeId) -> u32 {
        self.nodes[n.index()].key.var
    }

    fn lmul(&mut self, m: MatId, e: Edge) -> Edge {
        Edge {
            weight: self.mat_mul(m, e.weight),
            node: e.node,
        }
    }

    /// Normalizing node constructor over raw edges.
    fn mk(&mut self, var: u32, one: Edge, zero: Edge) -> Result<Edge, DdError> {
        for child in [one.node, zero.node] {
            let cv = self.var_of(child);
            if cv <= var {
                return Err(DdError::VariableOrder { var, child: cv });
            }
        }
        // Push the 0-weight up: W0 · (x ? W0⁻¹·W1 · f1 : f0).
        let w0_inv = self.mat_adjoint(zero.weight);
        let w1 = self.mat_mul(w0_inv, one.weight);
        if w1 == MatId::IDENTITY && one.node == zero.node {
            return Ok(zero);
        }
        let key = NodeKey {
            var,
            one: Edge {
                weight: w1,
                node: one.node,
            },
            zero: zero.node,
        };
        let node = match self.unique.get(&key) {
            Some(&n) => n,
            None => {
                if let Some(limit) = self.node_limit {
                    if self.live_nodes() >= limit {
                        return Err(DdError::NodeLimit { limit });
                    }
                }
                let boolean = w1.is_classical()
                    && self.nodes[one.node.index()].boolean
                    && self.nodes[zero.node.index()].boolean;
                let n = NodeId(self.nodes.len() as u32);
                self.nodes.push(Node { key, boolean });
                self.unique.insert(key, n);
                n
            }
        };
        Ok(Edge {
            weight: zero.weight,
            node,
        })
    }

    /// The constant function `I`.
    pub fn terminal(&self) -> DdmfRef {
        self.handle(Edge::ONE)
    }

    /// The constant function `M`.
    pub fn constant(&mut self, m: Unitary2) -> Result<DdmfRef, DdError> {
        let weight = self.intern_matrix(m)?;
        Ok(self.handle(Edge {
            weight,
            node: NodeId::TERMINAL,
        }))
    }

    /// The Boolean function `x_i`: `X` when `x_i = 1`, else `I`.
    pub fn variable(&mut self, var: u32) -> Result<DdmfRef, DdError> {
        self.check_var(var)?;
        let one = Edge {
            weight: MatId::NOT,
            node: NodeId::TERMINAL,
        };
        let e = self.mk(var, one, Edge::ONE)?;
        Ok(self.handle(e))
    }

    fn check_var(&self, var: u32) -> Result<(), DdError> {
        if var == 0 || var > self.num_vars {
            Err(DdError::VariableOutOfRange {
                var,
                num_vars: self.num_vars,
            })
        } else {
            Ok(())
        }
    }

    /// Builds `x_var ? one_weight · one_child : zero_weight · zero_child` in
    /// canonical form.
    pub fn make_node(
        &mut self,
        var: u32,
        one_weight: Unitary2,
        one_child: DdmfRef,
        zero_weight: Unitary2,
        zero_child: DdmfRef,
    ) -> Result<DdmfRef, DdError> {
        self.check_var(var)?;
        let one_child = self.own(one_child)?;
        let zero_child = self.own(zero_child)?;
        let w1 = self.intern_matrix(one_weight)?;
        let w0 = self.intern_matrix(zero_weight)?;
        let one = self.lmul(w1, one_child);
        let zero = self.lmul(w0, zero_child);
        let e = self.mk(var, one, zero)?;
        Ok(self.handle(e))
    }

    /// Pointwise product `A(a) · B(a)`.
    pub fn compose(&mut self, a: DdmfRef, b: DdmfRef) -> Result<DdmfRef, DdError> {
        let a = self.own(a)?;
        let b = self.own(b)?;
        let e = self.compose_edges(a, b)?;
        Ok(self.handle(e))
    }

    fn compose_edges(&mut self, a: Edge, b: Edge) -> Result<Edge, DdError> {
        if a.node.is_terminal() {
            return Ok(self.lmul(a.weight, b));
        }
        if b == Edge::ONE {
            return Ok(a);
        }
        // A(a)·B(a) = Wa · (f_a(a) · B(a))
        let inner = self.compose_node(a.node, b)?;
        Ok(self.lmul(a.weight, inner))
    }

    fn compose_node(&mut self, a: NodeId, b: Edge) -> Result<Edge, DdError> {
        if let Some(&r) = self.compose_cache.get(&(a, b)) {
            return Ok(r);
        }
        let var = self.var_of(a).min(self.var_of(b.node));
        let (a1, a0) = self.top_cofactors(
            Edge {
                weight: MatId::IDENTITY,
                node: a,
            },
            var,
        );
        let (b1, b0) = self.top_cofactors(b, var);
        let r1 = self.compose_edges(a1, b1)?;
        let r0 = self.compose_edges(a0, b0)?;
        let r = self.mk(var, r1, r0)?;
        self.compose_cache.insert((a, b), r);
        Ok(r)
    }

    /// Cofactors of `e` with respect to `var`, which must not lie below the
    /// top variable of `e`.
    fn top_cofactors(&mut self, e: Edge, var: u32) -> (Edge, Edge) {
        let key = self.nodes[e.node.index()].key;
        if key.var != var {
            return (e, e);
        }
        let one = self.lmul(e.weight, key.one);
        let zero = Edge {
            weight: e.weight,
            node: key.zero,
        };
        (one, zero)
    }

    /// `G(a)` where the Boolean guard `F(a)` is `X`, and `I` elsewhere.
    pub fn select(&mut self, f: DdmfRef, g: DdmfRef) -> Result<DdmfRef, DdError> {
        let fe = self.own(f)?;
        let ge = self.own(g)?;
        if !self.is_boolean(f) {
            return Err(DdError::NotBoolean);
        }
        let e = self.select_edges(fe, ge)?;
        Ok(self.handle(e))
    }

    fn select_edges(&mut self, f: Edge, g: Edge) -> Result<Edge, DdError> {
        if f.node.is_terminal() {
            return match f.weight {
                MatId::IDENTITY => Ok(Edge::ONE),
                MatId::NOT => Ok(g),
                _ => Err(DdError::NotBoolean),
            };
        }
        if g == Edge::ONE {
            return Ok(Edge::ONE);
        }
        if let Some(&r) = self.select_cache.get(&(f, g)) {
            return Ok(r);
        }
        let var = self.var_of(f.node).min(self.var_of(g.node));
        let (f1, f0) = self.top_cofactors(f, var);
        let (g1, g0) = self.top_cofactors(g, var);
        let r1 = self.select_edges(f1, g1)?;
        let r0 = self.select_edges(f0, g0)?;
        let r = self.mk(var, r1, r0)?;
        self.select_cache.insert((f, g), r);
        Ok(r)
    }

    /// Boolean complement, `X ⊕ F`.
    pub fn bool_not(&mut self, f: DdmfRef) -> Result<DdmfRef, DdError> {
        if !self.is_boolean(f) {
            return Err(DdError::NotBoolean);
        }
        let e = self.own(f)?;
        let e = self.lmul(MatId::NOT, e);
        Ok(self.handle(e))
    }

    /// Boolean conjunction; `select` restricted to Boolean operands.
    pub fn bool_and(&mut self, f: DdmfRef, g: DdmfRef) -> Result<DdmfRef, DdError> {
        if !self.is_boolean(g) {
            return Err(DdError::NotBoolean);
        }
        self.select(f, g)
    }

    /// True iff `F(a) ∈ {I, X}` for every assignment.
    ///
    /// Checked structurally: the root weight and every reachable 1-edge
    /// weight must be `I` or `X`. Sound in canonical form because the
    /// all-zeros continuation below any node evaluates to `I`.
    pub fn is_boolean(&self, d: DdmfRef) -> bool {
        d.edge.weight.is_classical() && self.nodes[d.edge.node.index()].boolean
    }

    /// Value of `d` at `assignment`, where `assignment[i - 1]` is `x_i`.
    pub fn evaluate(&mut self, d: DdmfRef, assignment: &[bool]) -> Result<Unitary2, DdError> {
        let id = self.evaluate_id(d, assignment)?;
        Ok(self.matrix(id).clone())
    }

    pub fn evaluate_id(&mut self, d: DdmfRef, assignment: &[bool]) -> Result<MatId, DdError> {
        let e = self.own(d)?;
        let mut acc = e.weight;
        let mut node = e.node;
        while !node.is_terminal() {
            let key = self.nodes[node.index()].key;
            let bit =
                *assignment
                    .get(key.var as usize - 1)
                    .ok_or(DdError::IncompleteAssignment {
                        var: key.var,
                        len: assignment.len(),
                    })?;
            if bit {
                acc = self.mat_mul(acc, key.one.weight);
                node = key.one.node;
            } else {
                node = key.zero;
            }
        }
        Ok(acc)
    }

    /// Restriction of `d` to `x_var := value`.
    pub fn cofactor(&mut self, d: DdmfRef, var: u32, value: bool) -> Result<DdmfRef, DdError> {
        let e = self.own(d)?;
        let mut memo = HashMap::new();
        let inner = self.cofactor_node(e.node, var, value, &mut memo)?;
        let e = self.lmul(e.weight, inner);
        Ok(self.handle(e))
    }

    fn cofactor_node(
        &mut self,
        n: NodeId,
        var: u32,
        value: bool,
        memo: &mut HashMap<NodeId, Edge>,
    ) -> Result<Edge, DdError> {
        let key = self.nodes[n.index()].key;
        if n.is_terminal() || key.var > var {
            return Ok(Edge {
                weight: MatId::IDENTITY,
                node: n,
            });
        }
        if key.var == var {
            return Ok(if value {
                key.one
            } else {
                Edge {
                    weight: MatId::IDENTITY,
                    node: key.zero,
                }
            });
        }
        if let Some(&r) = memo.get(&n) {
            return Ok(r);
        }
        let one = self.cofactor_node(key.one.node, var, value, memo)?;
        let one = self.lmul(key.one.weight, one);
        let zero = self.cofactor_node(key.zero, var, value, memo)?;
        let r = self.mk(key.var, one, zero)?;
        memo.insert(n, r);
        Ok(r)
    }

    /// Handle equality: same root weight and same root node.
    pub fn equal(&self, a: DdmfRef, b: DdmfRef) -> Result<bool, DdError> {
        Ok(self.own(a)? == self.own(b)?)
    }

    /// Some assignment (of length `num_vars`) on which `a` and `b` differ,
    /// or `None` when they are the same function.
    pub fn find_counterexample(
        &mut self,
        a: DdmfRef,
        b: DdmfRef,
    ) -> Result<Option<Vec<bool>>, DdError> {
        let mut a = self.own(a)?;
        let mut b = self.own(b)?;
        if a == b {
            return Ok(None);
        }
        let mut assignment = vec![false; self.num_vars as usize];
        // Invariant: a != b. Both terminal means the weights differ and any
        // completion works.
        while !(a.node.is_terminal() && b.node.is_terminal()) {
            let var = self.var_of(a.node).min(self.var_of(b.node));
            let (a1, a0) = self.top_cofactors(a, var);
            let (b1, b0) = self.top_cofactors(b, var);
            if a1 != b1 {
                assignment[var as usize - 1] = true;
                a = a1;
                b = b1;
            } else {
                a = a0;
                b = b0;
            }
        }
        Ok(Some(assignment))
    }

    /// Reachable non-terminal nodes of `d`.
    pub fn node_count(&self, d: DdmfRef) -> usize {
        self.shared_node_count(&[d])
    }

    /// Reachable non-terminal nodes of several roots, shared nodes counted
    /// once.
    pub fn shared_node_count(&self, roots: &[DdmfRef]) -> usize {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack: Vec<NodeId> = roots.iter().map(|d| d.edge.node).collect();
        let mut count = 0;
        while let Some(n) = stack.pop() {
            if n.is_terminal() || seen[n.index()] {
                continue;
            }
            seen[n.index()] = true;
            count += 1;
            let key = self.nodes[n.index()].key;
            stack.push(key.one.node);
            stack.push(key.zero);
        }
        count
    }

    /// Graphviz rendering: solid 1-edges, dashed 0-edges, non-identity
    /// weights as labels, one terminal labelled `I`.
    pub fn dot_export(&self, d: DdmfRef, labels: &[String]) -> String {
        let namer = MatrixNamer::new(self.ring, &[], 3);
        self.dot_export_with(d, labels, |m| namer.render(m))
    }

    pub fn dot_export_with(
        &self,
        d: DdmfRef,
        labels: &[String],
        name: impl Fn(&Unitary2) -> String,
    ) -> String {
        let esc = |s: String| s.replace('\\', "\\\\").replace('"', "\\\"");
        let var_label = |v: u32| {
            labels
                .get(v as usize - 1)
                .cloned()
                .unwrap_or_else(|| format!("x{v}"))
        };
        let mut out = String::from("digraph ddmf {\n");
        out.push_str("  root [shape=point];\n");
        out.push_str("  n0 [shape=box, label=\"I\"];\n");
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![d.edge.node];
        let mut order = Vec::new();
        while let Some(n) = stack.pop() {
            if n.is_terminal() || seen[n.index()] {
                continue;
            }
            seen[n.index()] = true;
            order.push(n);
            let key = self.nodes[n.index()].key;
            stack.push(key.zero);
            stack.push(key.one.node);
        }
        for n in &order {
            let key = self.nodes[n.index()].key;
            let _ = writeln!(
                out,
                "  n{} [shape=circle, label=\"{}\"];",
                n.0,
                esc(var_label(key.var))
            );
        }
        let weight_attr = |w: MatId| {
            if w == MatId::IDENTITY {
                String::new()
            } else {
                format!(", label=\"{}\"", esc(name(self.matrix(w))))
            }
        };
        let _ = writeln!(
            out,
            "  root -> n{} [style=solid{}];",
            d.edge.node.0,
            weight_attr(d.edge.weight)
        );
        for n in &order {
            let key = self.nodes[n.index()].key;
            let _ = writeln!(
                out,
                "  n{} -> n{} [style=solid{}];",
                n.0,
                key.one.node.0,
                weight_attr(key.one.weight)
            );
            let _ = writeln!(out, "  n{} -> n{} [style=dashed];", n.0, key.zero.0);
        }
        out.push_str("}\n");
        out
    }
}
