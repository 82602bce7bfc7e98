//! Union-find congruence closure over a hash-consed term graph.

use std::collections::HashMap;

use crate::syntax::{FunctionSymbol, PredicateSymbol, Term, Unknown};

use super::QcheckError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Head {
    Fun(FunctionSymbol),
    Unknown(Unknown),
    Pred(PredicateSymbol),
    True,
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub head: Head,
    pub args: Vec<usize>,
}

/// Every ground term (and predicate atom) seen so far, one node per distinct subterm.
#[derive(Clone, Debug, Default)]
pub(crate) struct TermGraph {
    pub nodes: Vec<Node>,
    index: HashMap<(Head, Vec<usize>), usize>,
}

impl TermGraph {
    pub const TRUE: usize = 0;

    pub fn new() -> Self {
        let mut g = TermGraph::default();
        g.node(Head::True, Vec::new());
        g
    }

    fn node(&mut self, head: Head, args: Vec<usize>) -> usize {
        if let Some(&id) = self.index.get(&(head.clone(), args.clone())) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            head: head.clone(),
            args: args.clone(),
        });
        self.index.insert((head, args), id);
        id
    }

    /// Interns a ground term. Panics on variables; callers check groundness first.
    pub fn term(&mut self, t: &Term) -> usize {
        match t {
            Term::Unknown(u) => self.node(Head::Unknown(u.clone()), Vec::new()),
            Term::App(f, args) => {
                let ids = args.iter().map(|a| self.term(a)).collect();
                self.node(Head::Fun(f.clone()), ids)
            }
            Term::Var(v) => panic!("variable ?{} in ground term", v.name()),
        }
    }

    pub fn pred(&mut self, p: &PredicateSymbol, args: &[Term]) -> usize {
        let ids = args.iter().map(|a| self.term(a)).collect();
        self.node(Head::Pred(p.clone()), ids)
    }

    pub fn lookup(&self, t: &Term) -> Option<usize> {
        match t {
            Term::Unknown(u) => self
                .index
                .get(&(Head::Unknown(u.clone()), Vec::new()))
                .copied(),
            Term::App(f, args) => {
                let ids = args
                    .iter()
                    .map(|a| self.lookup(a))
                    .collect::<Option<Vec<_>>>()?;
                self.index.get(&(Head::Fun(f.clone()), ids)).copied()
            }
            Term::Var(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }
}

/// Incremental congruence closure over a fixed [`TermGraph`]. Cloning is cheap
/// enough to snapshot it at every branch point of a search.
#[derive(Clone, Debug)]
pub(crate) struct Closure {
    find: Vec<usize>,
    size: Vec<u32>,
    uses: Vec<Vec<usize>>,
    sig: HashMap<(usize, Vec<usize>), usize>,
    heads: Vec<usize>,
    diseqs: Vec<(usize, usize)>,
    conflict: bool,
}

impl Closure {
    pub fn new(graph: &TermGraph) -> Self {
        let n = graph.len();
        let mut head_ids: HashMap<&Head, usize> = HashMap::new();
        let mut heads = Vec::with_capacity(n);
        let mut uses = vec![Vec::new(); n];
        let mut sig = HashMap::new();
        for (id, node) in graph.nodes.iter().enumerate() {
            let next = head_ids.len();
            let h = *head_ids.entry(&node.head).or_insert(next);
            heads.push(h);
            for &a in &node.args {
                if !uses[a].contains(&id) {
                    uses[a].push(id);
                }
            }
            if !node.args.is_empty() {
                sig.insert((h, node.args.clone()), id);
            }
        }
        Closure {
            find: (0..n).collect(),
            size: vec![1; n],
            uses,
            sig,
            heads,
            diseqs: Vec::new(),
            conflict: false,
        }
    }

    pub fn find(&self, mut x: usize) -> usize {
        while self.find[x] != x {
            x = self.find[x];
        }
        x
    }

    pub fn is_conflicting(&self) -> bool {
        self.conflict
    }

    pub fn same(&self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn assert_diseq(&mut self, a: usize, b: usize) {
        if self.same(a, b) {
            self.conflict = true;
        }
        self.diseqs.push((a, b));
    }

    pub fn merge(&mut self, a: usize, b: usize, graph: &TermGraph) {
        if self.conflict {
            return;
        }
        let mut pending = vec![(a, b)];
        while let Some((a, b)) = pending.pop() {
            let (ra, rb) = (self.find(a), self.find(b));
            if ra == rb {
                continue;
            }
            let (small, large) = if self.size[ra] < self.size[rb] {
                (ra, rb)
            } else {
                (rb, ra)
            };
            self.find[small] = large;
            self.size[large] += self.size[small];
            let moved = std::mem::take(&mut self.uses[small]);
            for &p in &moved {
                let key = (
                    self.heads[p],
                    graph.nodes[p].args.iter().map(|&x| self.find(x)).collect(),
                );
                match self.sig.get(&key) {
                    Some(&q) if self.find(q) != self.find(p) => pending.push((p, q)),
                    Some(_) => {}
                    None => {
                        self.sig.insert(key, p);
                    }
                }
            }
            self.uses[large].extend(moved);
        }
        self.conflict = self.diseqs.iter().any(|&(x, y)| self.same(x, y));
    }
}

/// A partition of a subterm-closed universe into congruence classes.
#[derive(Clone, Debug)]
pub struct CongruencePartition {
    graph: TermGraph,
    closure: Closure,
    universe: Vec<Term>,
}

impl CongruencePartition {
    pub fn universe(&self) -> &[Term] {
        &self.universe
    }

    /// Classes in order of their first member in the universe.
    pub fn classes(&self) -> Vec<Vec<Term>> {
        let mut order: Vec<usize> = Vec::new();
        let mut classes: HashMap<usize, Vec<Term>> = HashMap::new();
        for t in &self.universe {
            let r = self
                .closure
                .find(self.graph.lookup(t).expect("universe term interned"));
            classes
                .entry(r)
                .or_insert_with(|| {
                    order.push(r);
                    Vec::new()
                })
                .push(t.clone());
        }
        order
            .into_iter()
            .map(|r| classes.remove(&r).unwrap())
            .collect()
    }

    pub fn same_class(&self, a: &Term, b: &Term) -> Result<bool, QcheckError> {
        let ia = self.id(a)?;
        let ib = self.id(b)?;
        Ok(self.closure.same(ia, ib))
    }

    fn id(&self, t: &Term) -> Result<usize, QcheckError> {
        if !self.universe.contains(t) {
            return Err(QcheckError::OutsideUniverse(t.to_string()));
        }
        Ok(self.graph.lookup(t).expect("universe term interned"))
    }
}

/// Smallest congruence on `universe` containing `equalities`.
pub fn congruence_close(
    equalities: &[(Term, Term)],
    universe: &[Term],
) -> Result<CongruencePartition, QcheckError> {
    let mut universe_vec: Vec<Term> = Vec::new();
    for t in universe {
        if !t.is_ground() {
            return Err(QcheckError::NotGround(t.to_string()));
        }
        if !universe_vec.contains(t) {
            universe_vec.push(t.clone());
        }
    }
    for t in &universe_vec {
        for a in t.args() {
            if !universe_vec.contains(a) {
                return Err(QcheckError::OutsideUniverse(a.to_string()));
            }
        }
    }
    for (a, b) in equalities {
        for t in [a, b] {
            if !universe_vec.contains(t) {
                return Err(QcheckError::OutsideUniverse(t.to_string()));
            }
        }
    }
    let mut graph = TermGraph::new();
    for t in &universe_vec {
        graph.term(t);
    }
    let mut closure = Closure::new(&graph);
    for (a, b) in equalities {
        let (ia, ib) = (graph.lookup(a).unwrap(), graph.lookup(b).unwrap());
        closure.merge(ia, ib, &graph);
    }
    Ok(CongruencePartition {
        graph,
        closure,
        universe: universe_vec,
    })
}
