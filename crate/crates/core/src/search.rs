//! Enumeration of assignments under functional constraints.
//!
//! Equivariant maps and ends are both sets of assignments `x ↦ φ(x)` where a
//! family of rules `φ(t) = g(φ(s))` must hold. Assigning one variable forces
//! every variable reachable through rules, so a depth-first search with
//! forward propagation visits only consistent partial assignments.
//!
//! Variables are branched on in index order with values tried in ascending
//! order, so solutions are reported in lexicographic order of the full
//! assignment vector.

const UNSET: usize = usize::MAX;

#[derive(Debug, Clone, Default)]
pub struct Propagator {
    domains: Vec<usize>,
    tables: Vec<Vec<usize>>,
    rules: Vec<Vec<(usize, usize)>>,
}

/// The search gave up after visiting this many nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exhausted(pub u64);

impl Propagator {
    pub fn new(domains: Vec<usize>) -> Self {
        let rules = vec![Vec::new(); domains.len()];
        Propagator { domains, tables: Vec::new(), rules }
    }

    pub fn var_count(&self) -> usize {
        self.domains.len()
    }

    /// Registers a value table and returns its handle.
    pub fn add_table(&mut self, table: Vec<usize>) -> usize {
        self.tables.push(table);
        self.tables.len() - 1
    }

    /// Requires `value(dst) = table[value(src)]`.
    pub fn add_rule(&mut self, src: usize, dst: usize, table: usize) {
        debug_assert_eq!(self.tables[table].len(), self.domains[src]);
        debug_assert!(self.tables[table].iter().all(|&w| w < self.domains[dst]));
        self.rules[src].push((dst, table));
    }

    /// Calls `visit` on every consistent total assignment. Returns the number
    /// of search nodes visited, or [`Exhausted`] once `budget` is exceeded.
    pub fn solve(&self, budget: u64, mut visit: impl FnMut(&[usize])) -> Result<u64, Exhausted> {
        let mut state = State {
            vals: vec![UNSET; self.domains.len()],
            trail: Vec::new(),
            queue: Vec::new(),
            nodes: 0,
            budget,
        };
        self.dfs(0, &mut state, &mut visit)?;
        Ok(state.nodes)
    }

    /// Collects all solutions.
    pub fn solutions(&self, budget: u64) -> Result<Vec<Vec<usize>>, Exhausted> {
        let mut out = Vec::new();
        self.solve(budget, |s| out.push(s.to_vec()))?;
        Ok(out)
    }

    fn dfs(
        &self,
        start: usize,
        st: &mut State,
        visit: &mut impl FnMut(&[usize]),
    ) -> Result<(), Exhausted> {
        let n = self.domains.len();
        let Some(var) = (start..n).find(|&v| st.vals[v] == UNSET) else {
            visit(&st.vals);
            return Ok(());
        };
        for value in 0..self.domains[var] {
            st.nodes += 1;
            if st.nodes > st.budget {
                return Err(Exhausted(st.nodes));
            }
            let mark = st.trail.len();
            if self.assign(var, value, st) {
                self.dfs(var + 1, st, visit)?;
            }
            for &t in &st.trail[mark..] {
                st.vals[t] = UNSET;
            }
            st.trail.truncate(mark);
        }
        Ok(())
    }

    fn assign(&self, var: usize, value: usize, st: &mut State) -> bool {
        st.vals[var] = value;
        st.trail.push(var);
        st.queue.clear();
        st.queue.push(var);
        while let Some(src) = st.queue.pop() {
            let v = st.vals[src];
            for &(dst, table) in &self.rules[src] {
                let w = self.tables[table][v];
                match st.vals[dst] {
                    UNSET => {
                        st.vals[dst] = w;
                        st.trail.push(dst);
                        st.queue.push(dst);
                    }
                    current if current != w => return false,
                    _ => {}
                }
            }
        }
        true
    }
}

struct State {
    vals: Vec<usize>,
    trail: Vec<usize>,
    queue: Vec<usize>,
    nodes: u64,
    budget: u64,
}
