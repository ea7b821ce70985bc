use super::ast::PatternAst;
use serde::Serialize;

pub type StateId = usize;

/// What a transition consumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Symbol(char),
    /// Any single symbol.
    Any,
    /// Consumes nothing.
    Epsilon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    pub label: Label,
    pub to: StateId,
}

/// A Thompson automaton: one start state, one accept state with no
/// outgoing transitions, and at most two outgoing transitions per state.
#[derive(Clone, Debug)]
pub struct Nfa {
    start: StateId,
    accept: StateId,
    transitions: Vec<Transition>,
    // Per-state indices into `transitions`.
    outgoing: Vec<Vec<usize>>,
}

/// Half-open `[start, end)` interval in Unicode scalar offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MatchSpan {
    pub start: usize,
    pub end: usize,
}

impl MatchSpan {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end);
        MatchSpan { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }
}

/// Compiles a pattern tree by Thompson construction.
pub fn compile_nfa(ast: &PatternAst) -> Nfa {
    let mut builder = Builder::default();
    let (start, accept) = builder.fragment(ast);
    let mut outgoing = vec![Vec::new(); builder.state_count];
    for (i, t) in builder.transitions.iter().enumerate() {
        outgoing[t.from].push(i);
    }
    Nfa {
        start,
        accept,
        transitions: builder.transitions,
        outgoing,
    }
}

#[derive(Default)]
struct Builder {
    state_count: usize,
    transitions: Vec<Transition>,
}

impl Builder {
    fn state(&mut self) -> StateId {
        self.state_count += 1;
        self.state_count - 1
    }

    fn edge(&mut self, from: StateId, label: Label, to: StateId) {
        self.transitions.push(Transition { from, label, to });
    }

    /// Returns the (start, accept) pair of a fresh sub-automaton whose
    /// accept state has no outgoing edges yet.
    fn fragment(&mut self, ast: &PatternAst) -> (StateId, StateId) {
        match ast {
            PatternAst::Epsilon => self.single(Label::Epsilon),
            PatternAst::Literal(c) => self.single(Label::Symbol(*c)),
            PatternAst::AnySymbol => self.single(Label::Any),
            PatternAst::Concat(l, r) => {
                let (ls, la) = self.fragment(l);
                let (rs, ra) = self.fragment(r);
                self.edge(la, Label::Epsilon, rs);
                (ls, ra)
            }
            PatternAst::Union(l, r) => {
                let s = self.state();
                let (ls, la) = self.fragment(l);
                let (rs, ra) = self.fragment(r);
                let a = self.state();
                self.edge(s, Label::Epsilon, ls);
                self.edge(s, Label::Epsilon, rs);
                self.edge(la, Label::Epsilon, a);
                self.edge(ra, Label::Epsilon, a);
                (s, a)
            }
            PatternAst::Star(inner) => {
                let s = self.state();
                let (is, ia) = self.fragment(inner);
                let a = self.state();
                self.edge(s, Label::Epsilon, is);
                self.edge(s, Label::Epsilon, a);
                self.edge(ia, Label::Epsilon, is);
                self.edge(ia, Label::Epsilon, a);
                (s, a)
            }
        }
    }

    fn single(&mut self, label: Label) -> (StateId, StateId) {
        let s = self.state();
        let a = self.state();
        self.edge(s, label, a);
        (s, a)
    }
}

/// Active state set with O(1) membership and insertion order retained.
struct StateSet {
    members: Vec<StateId>,
    present: Vec<bool>,
}

impl StateSet {
    fn new(state_count: usize) -> Self {
        StateSet {
            members: Vec::with_capacity(state_count),
            present: vec![false; state_count],
        }
    }

    fn clear(&mut self) {
        for &s in &self.members {
            self.present[s] = false;
        }
        self.members.clear();
    }

    fn insert(&mut self, s: StateId) -> bool {
        if self.present[s] {
            return false;
        }
        self.present[s] = true;
        self.members.push(s);
        true
    }

    fn contains(&self, s: StateId) -> bool {
        self.present[s]
    }

    fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn sorted(&self) -> Vec<StateId> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }
}

/// Set-based simulation state for one scan attempt.
struct Simulation<'a> {
    nfa: &'a Nfa,
    current: StateSet,
    next: StateSet,
    stack: Vec<StateId>,
}

impl<'a> Simulation<'a> {
    fn new(nfa: &'a Nfa) -> Self {
        let n = nfa.state_count();
        Simulation {
            nfa,
            current: StateSet::new(n),
            next: StateSet::new(n),
            stack: Vec::new(),
        }
    }

    fn reset(&mut self) {
        self.current.clear();
        self.stack.push(self.nfa.start);
        Self::close(self.nfa, &mut self.current, &mut self.stack);
    }

    /// Adds everything reachable over epsilon edges from the stacked states.
    fn close(nfa: &Nfa, set: &mut StateSet, stack: &mut Vec<StateId>) {
        while let Some(s) = stack.pop() {
            if !set.insert(s) {
                continue;
            }
            for &t in &nfa.outgoing[s] {
                let t = nfa.transitions[t];
                if t.label == Label::Epsilon && !set.contains(t.to) {
                    stack.push(t.to);
                }
            }
        }
    }

    fn step(&mut self, c: char) {
        self.next.clear();
        for &s in &self.current.members {
            for &t in &self.nfa.outgoing[s] {
                let t = self.nfa.transitions[t];
                let consumes = match t.label {
                    Label::Symbol(sym) => sym == c,
                    Label::Any => true,
                    Label::Epsilon => false,
                };
                if consumes {
                    self.stack.push(t.to);
                }
            }
        }
        Self::close(self.nfa, &mut self.next, &mut self.stack);
        std::mem::swap(&mut self.current, &mut self.next);
    }

    fn accepting(&self) -> bool {
        self.current.contains(self.nfa.accept)
    }

    fn dead(&self) -> bool {
        self.current.is_empty()
    }

    /// Runs from `start` and returns the end of the longest match there.
    fn longest_from(&mut self, chars: &[char], start: usize) -> Option<usize> {
        self.reset();
        let mut last = self.accepting().then_some(start);
        for (offset, &c) in chars.iter().enumerate().skip(start) {
            self.step(c);
            if self.dead() {
                break;
            }
            if self.accepting() {
                last = Some(offset + 1);
            }
        }
        last
    }
}

impl Nfa {
    pub fn state_count(&self) -> usize {
        self.outgoing.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accept(&self) -> StateId {
        self.accept
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn out_degree(&self, state: StateId) -> usize {
        self.outgoing[state].len()
    }

    /// Whole-input acceptance.
    pub fn match_full(&self, input: &str) -> bool {
        let mut sim = Simulation::new(self);
        sim.reset();
        for c in input.chars() {
            sim.step(c);
            if sim.dead() {
                return false;
            }
        }
        sim.accepting()
    }

    /// Leftmost start, longest match at that start.
    pub fn find_first(&self, input: &str) -> Option<MatchSpan> {
        let chars: Vec<char> = input.chars().collect();
        self.find_first_chars(&chars)
    }

    pub(crate) fn find_first_chars(&self, chars: &[char]) -> Option<MatchSpan> {
        let mut sim = Simulation::new(self);
        (0..=chars.len()).find_map(|start| {
            sim.longest_from(chars, start)
                .map(|end| MatchSpan::new(start, end))
        })
    }

    /// Records the state sets visited by [`find_first`](Self::find_first),
    /// one attempt per start position tried.
    pub fn trace_scan(&self, input: &str) -> ScanTrace {
        let chars: Vec<char> = input.chars().collect();
        let mut attempts = Vec::new();
        let mut result = None;
        for start in 0..=chars.len() {
            let attempt = self.trace_attempt(&chars, start, false);
            let accepted = attempt.accepted_end;
            attempts.push(attempt);
            if let Some(end) = accepted {
                result = Some(MatchSpan::new(start, end));
                break;
            }
        }
        ScanTrace { attempts, result }
    }

    /// Records a single whole-input attempt, as used by
    /// [`match_full`](Self::match_full).
    pub fn trace_full(&self, input: &str) -> ScanTrace {
        let chars: Vec<char> = input.chars().collect();
        let attempt = self.trace_attempt(&chars, 0, true);
        let result = attempt.accepted_end.map(|end| MatchSpan::new(0, end));
        ScanTrace {
            attempts: vec![attempt],
            result,
        }
    }

    fn trace_attempt(&self, chars: &[char], start: usize, whole: bool) -> StartAttempt {
        let mut sim = Simulation::new(self);
        sim.reset();
        let initial = sim.current.sorted();
        let mut accepted_end = sim.accepting().then_some(start);
        let mut steps = Vec::new();
        for (offset, &c) in chars.iter().enumerate().skip(start) {
            sim.step(c);
            steps.push(TraceStep {
                offset,
                symbol: c,
                active: sim.current.sorted(),
                accepting: sim.accepting(),
            });
            if sim.dead() {
                break;
            }
            if sim.accepting() {
                accepted_end = Some(offset + 1);
            }
        }
        if whole && accepted_end != Some(chars.len()) {
            accepted_end = None;
        }
        StartAttempt {
            start,
            initial,
            steps,
            accepted_end,
        }
    }
}

/// Free-function form of [`Nfa::match_full`].
pub fn match_full(nfa: &Nfa, input: &str) -> bool {
    nfa.match_full(input)
}

/// Free-function form of [`Nfa::find_first`].
pub fn find_first(nfa: &Nfa, input: &str) -> Option<MatchSpan> {
    nfa.find_first(input)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanTrace {
    pub attempts: Vec<StartAttempt>,
    pub result: Option<MatchSpan>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StartAttempt {
    pub start: usize,
    /// Epsilon closure of the start state, sorted.
    pub initial: Vec<StateId>,
    pub steps: Vec<TraceStep>,
    pub accepted_end: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub offset: usize,
    pub symbol: char,
    pub active: Vec<StateId>,
    pub accepting: bool,
}
