//! Random well-formed light global types for property testing and benchmarks.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::ast::{Branch, DeclName, Declarations, Label, LightType, RecVar, Role, Sort};

const LABELS: &[&str] = &["ok", "ko", "go", "stop", "more", "done", "yes", "no"];
const SORTS: [Sort; 4] = [Sort::Unit, Sort::Nat, Sort::Str, Sort::Bool];

/// Shape limits for generated types.
#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Maximum number of nested branchings on any path.
    pub max_depth: usize,
    pub roles: usize,
    pub max_branches: usize,
    /// Maximum number of `rec` binders in one tree.
    pub max_recs: usize,
    /// Probability that a branching is a single `unit` interaction.
    pub redundant_bias: f64,
    /// Number of extra declarations for [`random_light`]; zero yields global types.
    pub max_decls: usize,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            max_depth: 6,
            roles: 4,
            max_branches: 3,
            max_recs: 2,
            redundant_bias: 0.35,
            max_decls: 0,
        }
    }
}

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    cfg: GenConfig,
    recs_left: usize,
    var_counter: usize,
    /// Declarations a generated tree may call.
    callable: Vec<DeclName>,
}

struct Scope {
    var: RecVar,
    guarded: bool,
}

impl<R: Rng> Gen<'_, R> {
    fn role(&mut self, i: usize) -> Role {
        Role::new(format!("r{i}")).expect("valid role")
    }

    fn leaf(&mut self, scope: &[Scope]) -> LightType {
        let guarded: Vec<&Scope> = scope.iter().filter(|s| s.guarded).collect();
        if !guarded.is_empty() && self.rng.random_bool(0.5) {
            return LightType::Var(guarded.choose(self.rng).expect("non-empty").var.clone());
        }
        if !self.callable.is_empty() && self.rng.random_bool(0.4) {
            return LightType::Call(self.callable.choose(self.rng).expect("non-empty").clone());
        }
        LightType::End
    }

    fn ty(&mut self, depth: usize, scope: &mut Vec<Scope>) -> LightType {
        if depth == 0 || (depth < self.cfg.max_depth && self.rng.random_bool(0.15)) {
            return self.leaf(scope);
        }
        if self.recs_left > 0 && depth >= 2 && self.rng.random_bool(0.12) {
            self.recs_left -= 1;
            self.var_counter += 1;
            let var = RecVar::new(format!("t{}", self.var_counter)).expect("valid variable");
            scope.push(Scope {
                var: var.clone(),
                guarded: false,
            });
            // The body starts with an interaction so the variable is guarded.
            let body = self.branching(depth, scope);
            scope.pop();
            return LightType::rec(var, body);
        }
        self.branching(depth, scope)
    }

    fn branching(&mut self, depth: usize, scope: &mut Vec<Scope>) -> LightType {
        let roles = self.cfg.roles.max(2);
        let s = self.rng.random_range(0..roles);
        let r = (s + self.rng.random_range(1..roles)) % roles;
        let (sender, receiver) = (self.role(s), self.role(r));

        let saved: Vec<bool> = scope.iter().map(|s| s.guarded).collect();
        scope.iter_mut().for_each(|s| s.guarded = true);

        let branches = if self.rng.random_bool(self.cfg.redundant_bias) {
            let label = Label::new(*LABELS.choose(self.rng).expect("labels")).expect("label");
            vec![Branch::new(label, Sort::Unit, self.ty(depth - 1, scope))]
        } else {
            let n = self.rng.random_range(1..=self.cfg.max_branches.max(1));
            let labels: Vec<&&str> = LABELS.choose_multiple(self.rng, n).collect();
            let mut branches = Vec::with_capacity(n);
            for l in labels {
                let mut sort = *SORTS.choose(self.rng).expect("sorts");
                // A lone unit branch would be redundant; keep this path informative.
                if n == 1 && sort == Sort::Unit {
                    sort = Sort::Nat;
                }
                let label = Label::new(*l).expect("label");
                branches.push(Branch::new(label, sort, self.ty(depth - 1, scope)));
            }
            branches
        };

        for (s, g) in scope.iter_mut().zip(saved) {
            s.guarded = g;
        }
        LightType::branching(sender, receiver, branches).expect("generated branching is valid")
    }
}

/// A random closed, call-free, well-formed type.
pub fn random_global<R: Rng>(rng: &mut R, cfg: &GenConfig) -> LightType {
    let mut g = Gen {
        rng,
        cfg: cfg.clone(),
        recs_left: cfg.max_recs,
        var_counter: 0,
        callable: Vec::new(),
    };
    let depth = g.cfg.max_depth;
    g.ty(depth, &mut Vec::new())
}

/// A random well-formed main type with up to `cfg.max_decls` declarations.
/// Declaration `d<i>` only calls `d<j>` with `j > i`, so the call graph is acyclic.
pub fn random_light<R: Rng>(rng: &mut R, cfg: &GenConfig) -> (LightType, Declarations) {
    let n = if cfg.max_decls == 0 {
        0
    } else {
        rng.random_range(0..=cfg.max_decls)
    };
    let names: Vec<DeclName> = (0..n)
        .map(|i| DeclName::new(format!("d{i}")).expect("valid name"))
        .collect();
    let mut bodies = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let mut g = Gen {
            rng: &mut *rng,
            cfg: cfg.clone(),
            recs_left: cfg.max_recs,
            var_counter: 0,
            callable: names[i + 1..].to_vec(),
        };
        let depth = g.rng.random_range(1..=cfg.max_depth.max(1));
        bodies.push((names[i].clone(), g.ty(depth, &mut Vec::new())));
    }
    bodies.reverse();
    let decls: Declarations = bodies.into_iter().collect();
    let mut g = Gen {
        rng,
        cfg: cfg.clone(),
        recs_left: cfg.max_recs,
        var_counter: 0,
        callable: names,
    };
    let depth = g.cfg.max_depth;
    let main = g.ty(depth, &mut Vec::new());
    (main, decls)
}
