//! Depth-first search for a 2-colouring in which every system's blue count
//! lies in a window `[lo, hi]`, with cardinality propagation.

use crate::sts::LabelledFamily;

pub(crate) enum EngineResult {
    /// Colour per triple rank (ranks outside every system are red).
    Found(Vec<u8>),
    /// The whole tree was searched without finding a colouring.
    Exhausted,
    /// The node budget ran out; the decision path at that point is kept.
    OutOfBudget(Vec<(usize, u8)>),
}

pub(crate) struct EngineLimits<'p> {
    pub budget: u64,
    pub checkpoint_interval: u64,
    pub resume: &'p [(usize, u8)],
}

pub(crate) type ProgressSink<'s> = dyn FnMut(&[(usize, u8)], u64) + 's;

const UNSET: i8 = -1;

pub(crate) struct WindowSearch {
    constraint_vars: Vec<Vec<u32>>,
    var_constraints: Vec<Vec<u32>>,
    lo: Vec<u32>,
    hi: Vec<u32>,
    blue: Vec<u32>,
    free: Vec<u32>,
    assign: Vec<i8>,
    trail: Vec<usize>,
    queue: Vec<(usize, u8)>,
    /// Variables by descending number of systems containing them, then rank.
    static_order: Vec<usize>,
    /// Swapping both colours maps solutions to solutions.
    symmetric: bool,
    path: Vec<(usize, u8)>,
    pub(crate) nodes: u64,
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

impl WindowSearch {
    /// Every system gets the same window `[lo, hi]` on its blue count.
    pub fn new(family: &LabelledFamily, lo: u32, hi: u32) -> Self {
        let t = family.order().triples();
        let constraint_vars: Vec<Vec<u32>> = family
            .systems()
            .iter()
            .map(|s| s.blocks().iter().map(|&b| b as u32).collect())
            .collect();
        let var_constraints = family.incidence();
        let mut static_order: Vec<usize> = (0..t).filter(|&v| !var_constraints[v].is_empty()).collect();
        static_order.sort_by_key(|&v| (std::cmp::Reverse(var_constraints[v].len()), v));
        let k = constraint_vars.len();
        let m = family.order().blocks() as u32;
        WindowSearch {
            free: constraint_vars.iter().map(|c| c.len() as u32).collect(),
            constraint_vars,
            var_constraints,
            lo: vec![lo; k],
            hi: vec![hi; k],
            blue: vec![0; k],
            assign: vec![UNSET; t],
            trail: Vec::with_capacity(t),
            queue: Vec::new(),
            static_order,
            symmetric: lo + hi == m,
            path: Vec::new(),
            nodes: 0,
        }
    }

    pub fn run(&mut self, limits: &EngineLimits<'_>, progress: &mut ProgressSink<'_>) -> EngineResult {
        // Root-level conflicts (a window that no count can meet).
        let root_ok = (0..self.lo.len()).all(|c| self.lo[c] <= self.hi[c] && self.free[c] >= self.lo[c]);
        if !root_ok || !self.propagate_all_forced() {
            return EngineResult::Exhausted;
        }
        match self.dfs(0, true, limits, progress) {
            Step::Found => EngineResult::Found(self.assign.iter().map(|&a| a.max(0) as u8).collect()),
            Step::Exhausted => EngineResult::Exhausted,
            Step::OutOfBudget => EngineResult::OutOfBudget(self.path.clone()),
        }
    }

    fn propagate_all_forced(&mut self) -> bool {
        for c in 0..self.lo.len() {
            if self.free[c] > 0 && (self.blue[c] == self.hi[c] || self.blue[c] + self.free[c] == self.lo[c]) {
                let forced = u8::from(self.blue[c] != self.hi[c]);
                let vars = self.constraint_vars[c].clone();
                for v in vars {
                    if self.assign[v as usize] == UNSET && !self.propagate(v as usize, forced) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn dfs(
        &mut self,
        depth: usize,
        on_resume_path: bool,
        limits: &EngineLimits<'_>,
        progress: &mut ProgressSink<'_>,
    ) -> Step {
        let resuming = on_resume_path
            && limits
                .resume
                .get(depth)
                .is_some_and(|&(v, _)| self.assign.get(v) == Some(&UNSET));
        // Replayed nodes on the resume path were already paid for.
        if !resuming {
            self.nodes += 1;
            if self.nodes > limits.budget {
                return Step::OutOfBudget;
            }
            if limits.checkpoint_interval > 0 && self.nodes.is_multiple_of(limits.checkpoint_interval) {
                progress(&self.path, self.nodes);
            }
        }
        let var = match (resuming, self.pick_var()) {
            (_, None) => return Step::Found,
            (true, Some(_)) => limits.resume[depth].0,
            (false, Some(v)) => v,
        };
        let first = if resuming { limits.resume[depth].1 } else { 0 };
        let last = if depth == 0 && self.symmetric { 0 } else { 1 };
        for val in first..=last.max(first) {
            let mark = self.trail.len();
            self.path.push((var, val));
            if self.propagate(var, val) {
                let child_resume = resuming && val == first;
                match self.dfs(depth + 1, child_resume, limits, progress) {
                    Step::Found => return Step::Found,
                    Step::OutOfBudget => return Step::OutOfBudget,
                    Step::Exhausted => {}
                }
            }
            self.undo(mark);
            self.path.pop();
        }
        Step::Exhausted
    }

    /// Unassigned variable in the most near-tight constraints; ties follow
    /// the static order.
    fn pick_var(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None;
        for &v in &self.static_order {
            if self.assign[v] != UNSET {
                continue;
            }
            let tight = self.var_constraints[v]
                .iter()
                .filter(|&&c| {
                    let c = c as usize;
                    let up = self.hi[c] - self.blue[c];
                    let down = self.blue[c] + self.free[c] - self.lo[c];
                    up.min(down) <= 1
                })
                .count();
            if best.is_none_or(|(_, t)| tight > t) {
                best = Some((v, tight));
            }
        }
        best.map(|(v, _)| v)
    }

    /// Assigns `var = val` and everything it forces; false on conflict.
    /// The trail records every assignment made, conflicting or not.
    fn propagate(&mut self, var: usize, val: u8) -> bool {
        self.queue.clear();
        self.queue.push((var, val));
        while let Some((v, x)) = self.queue.pop() {
            if self.assign[v] != UNSET {
                if self.assign[v] != x as i8 {
                    return false;
                }
                continue;
            }
            self.assign[v] = x as i8;
            self.trail.push(v);
            let mut ok = true;
            for i in 0..self.var_constraints[v].len() {
                let c = self.var_constraints[v][i] as usize;
                self.free[c] -= 1;
                self.blue[c] += x as u32;
                if self.blue[c] > self.hi[c] || self.blue[c] + self.free[c] < self.lo[c] {
                    ok = false;
                } else if ok && self.free[c] > 0 {
                    let forced = if self.blue[c] == self.hi[c] {
                        Some(0)
                    } else if self.blue[c] + self.free[c] == self.lo[c] {
                        Some(1)
                    } else {
                        None
                    };
                    if let Some(f) = forced {
                        for &u in &self.constraint_vars[c] {
                            if self.assign[u as usize] == UNSET {
                                self.queue.push((u as usize, f));
                            }
                        }
                    }
                }
            }
            if !ok {
                return false;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let v = self.trail.pop().expect("trail above mark");
            let x = self.assign[v] as u32;
            for &c in &self.var_constraints[v] {
                let c = c as usize;
                self.free[c] += 1;
                self.blue[c] -= x;
            }
            self.assign[v] = UNSET;
        }
    }
}
