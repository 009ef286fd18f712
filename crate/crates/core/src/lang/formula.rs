use std::collections::{HashMap, HashSet};
use std::fmt;

/// Handle to a node of a [`FormulaArena`]. Two handles from the same arena
/// are equal exactly when the formulas they denote are structurally equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormulaId(u32);

impl FormulaId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Atom(String),
    Top,
    Bottom,
    Not(FormulaId),
    And(FormulaId, FormulaId),
    Or(FormulaId, FormulaId),
    Xor(FormulaId, FormulaId),
    /// Conditional reachability: `Gamma(through, target)`.
    Gamma(FormulaId, FormulaId),
    /// Converse near: some face of the cell satisfies the argument.
    CvNear(FormulaId),
}

impl Node {
    pub fn children(&self) -> impl Iterator<Item = FormulaId> {
        let (a, b) = match *self {
            Node::Atom(_) | Node::Top | Node::Bottom => (None, None),
            Node::Not(a) | Node::CvNear(a) => (Some(a), None),
            Node::And(a, b) | Node::Or(a, b) | Node::Xor(a, b) | Node::Gamma(a, b) => {
                (Some(a), Some(b))
            }
        };
        a.into_iter().chain(b)
    }
}

/// Hash-consed store of formula nodes. Children always have smaller ids
/// than their parents, so id order is a topological order of the DAG.
#[derive(Debug, Clone, Default)]
pub struct FormulaArena {
    nodes: Vec<Node>,
    index: HashMap<Node, FormulaId>,
}

impl FormulaArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, node: Node) -> FormulaId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        debug_assert!(node.children().all(|c| c.index() < self.nodes.len()));
        let id = FormulaId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn node(&self, id: FormulaId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn atom(&mut self, name: &str) -> FormulaId {
        self.intern(Node::Atom(name.to_string()))
    }

    pub fn top(&mut self) -> FormulaId {
        self.intern(Node::Top)
    }

    pub fn bottom(&mut self) -> FormulaId {
        self.intern(Node::Bottom)
    }

    pub fn not(&mut self, f: FormulaId) -> FormulaId {
        self.intern(Node::Not(f))
    }

    pub fn and(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.intern(Node::And(a, b))
    }

    pub fn or(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.intern(Node::Or(a, b))
    }

    pub fn xor(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        self.intern(Node::Xor(a, b))
    }

    pub fn gamma(&mut self, through: FormulaId, target: FormulaId) -> FormulaId {
        self.intern(Node::Gamma(through, target))
    }

    pub fn cv_near(&mut self, f: FormulaId) -> FormulaId {
        self.intern(Node::CvNear(f))
    }

    /// `gamma(f, true)`: the closure of `f`.
    pub fn near(&mut self, f: FormulaId) -> FormulaId {
        let top = self.top();
        self.gamma(f, top)
    }

    /// `a & gamma(a, b)`.
    pub fn eta(&mut self, a: FormulaId, b: FormulaId) -> FormulaId {
        let g = self.gamma(a, b);
        self.and(a, g)
    }

    /// Nodes reachable from `roots`, ascending (children before parents).
    pub fn reachable(&self, roots: &[FormulaId]) -> Vec<FormulaId> {
        let mut seen = HashSet::new();
        let mut stack: Vec<FormulaId> = roots.to_vec();
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                stack.extend(self.node(id).children());
            }
        }
        let mut out: Vec<FormulaId> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    /// Number of distinct DAG nodes under `root`.
    pub fn node_count(&self, root: FormulaId) -> usize {
        self.reachable(&[root]).len()
    }

    /// Atom names occurring under `root`.
    pub fn atoms(&self, root: FormulaId) -> Vec<&str> {
        self.reachable(&[root])
            .into_iter()
            .filter_map(|id| match self.node(id) {
                Node::Atom(name) => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    /// `root` with every occurrence of atom `name` replaced by `with`.
    pub fn substitute(&mut self, root: FormulaId, name: &str, with: FormulaId) -> FormulaId {
        let mut done: HashMap<FormulaId, FormulaId> = HashMap::new();
        for id in self.reachable(&[root]) {
            let m = |c: &FormulaId| done[c];
            let node = match self.node(id).clone() {
                Node::Atom(a) if a == name => {
                    done.insert(id, with);
                    continue;
                }
                Node::Not(a) => Node::Not(m(&a)),
                Node::And(a, b) => Node::And(m(&a), m(&b)),
                Node::Or(a, b) => Node::Or(m(&a), m(&b)),
                Node::Xor(a, b) => Node::Xor(m(&a), m(&b)),
                Node::Gamma(a, b) => Node::Gamma(m(&a), m(&b)),
                Node::CvNear(a) => Node::CvNear(m(&a)),
                leaf => leaf,
            };
            let new = self.intern(node);
            done.insert(id, new);
        }
        done[&root]
    }

    pub fn display(&self, id: FormulaId) -> FormulaDisplay<'_> {
        FormulaDisplay { arena: self, id }
    }
}

pub struct FormulaDisplay<'a> {
    arena: &'a FormulaArena,
    id: FormulaId,
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |id| FormulaDisplay { arena: self.arena, id };
        match self.arena.node(self.id) {
            Node::Atom(name) => write!(f, "ap({name:?})"),
            Node::Top => f.write_str("tt"),
            Node::Bottom => f.write_str("ff"),
            Node::Not(a) => write!(f, "not({})", sub(*a)),
            Node::And(a, b) => write!(f, "and({}, {})", sub(*a), sub(*b)),
            Node::Or(a, b) => write!(f, "or({}, {})", sub(*a), sub(*b)),
            Node::Xor(a, b) => write!(f, "xor({}, {})", sub(*a), sub(*b)),
            Node::Gamma(a, b) => write!(f, "through({}, {})", sub(*a), sub(*b)),
            Node::CvNear(a) => write!(f, "cvnear({})", sub(*a)),
        }
    }
}
