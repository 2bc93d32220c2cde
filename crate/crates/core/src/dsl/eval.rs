use std::collections::HashMap;
use std::sync::atomic::{AtomicU32, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::Instant;

use super::builtins::{self, Context};
use super::error::{ErrorKind, ScriptError};
use super::graph::{Action, NodeId, NodeOp, Program};
use super::types::TypeTag;
use crate::grid::{BoolImage, ColorImage, GridDims, ScalarImage};
use crate::imaging::{self, IntensityMode};
use crate::texture::TextureMode;
use crate::Adjacency;

/// A runtime value. Images are shared, never copied.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Number(f64),
    Bool(bool),
    Str(Arc<str>),
    Model(Arc<ColorImage>),
    Scalar(Arc<ScalarImage>),
    Mask(Arc<BoolImage>),
}

impl Value {
    pub fn type_tag(&self) -> TypeTag {
        match self {
            Value::Number(_) => TypeTag::Number,
            Value::Bool(_) => TypeTag::Bool,
            Value::Str(_) => TypeTag::String,
            Value::Model(_) => TypeTag::Model,
            Value::Scalar(_) => TypeTag::ValNumber,
            Value::Mask(_) => TypeTag::ValBool,
        }
    }

    // The accessors below are only reached after type checking, so a
    // mismatch is a bug in the checker rather than in the script.

    pub fn as_number(&self) -> f64 {
        match self {
            Value::Number(n) => *n,
            other => panic!("expected Number, got {}", other.type_tag()),
        }
    }

    pub fn as_bool(&self) -> bool {
        match self {
            Value::Bool(b) => *b,
            other => panic!("expected Bool, got {}", other.type_tag()),
        }
    }

    pub fn as_model(&self) -> &ColorImage {
        match self {
            Value::Model(m) => m,
            other => panic!("expected Model, got {}", other.type_tag()),
        }
    }

    pub fn as_scalar(&self) -> &ScalarImage {
        match self {
            Value::Scalar(s) => s,
            other => panic!("expected Valuation(Number), got {}", other.type_tag()),
        }
    }

    pub fn as_mask(&self) -> &BoolImage {
        match self {
            Value::Mask(m) => m,
            other => panic!("expected Valuation(Bool), got {}", other.type_tag()),
        }
    }

    /// The text `print` emits for this value.
    pub fn display(&self) -> String {
        match self {
            Value::Number(n) => super::format_number(*n),
            Value::Bool(b) => b.to_string(),
            Value::Str(s) => s.to_string(),
            other => format!("<{}>", other.type_tag()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvalOptions {
    pub adjacency: Adjacency,
    pub intensity: IntensityMode,
    pub texture: TextureMode,
    /// Worker threads; 0 picks the rayon default.
    pub threads: usize,
}

/// The values of all roots after a successful evaluation.
#[derive(Clone, Debug)]
pub struct Evaluation {
    roots: HashMap<NodeId, Value>,
    eval_counts: Vec<u32>,
    finished_ms: Vec<f64>,
    dims: Option<GridDims>,
}

impl Evaluation {
    pub fn value(&self, id: NodeId) -> Option<&Value> {
        self.roots.get(&id)
    }

    /// How many times each node's operation ran.
    pub fn eval_counts(&self) -> &[u32] {
        &self.eval_counts
    }

    /// Dimensions of the loaded space, if anything was loaded.
    pub fn dims(&self) -> Option<GridDims> {
        self.dims
    }

    /// Milliseconds from the start of evaluation until node `id` was ready.
    pub fn finished_ms(&self, id: NodeId) -> f64 {
        self.finished_ms[id as usize]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Event {
    Print {
        label: String,
        text: String,
        elapsed_ms: f64,
    },
    Save {
        path: String,
        elapsed_ms: f64,
    },
}

impl Event {
    /// `LABEL=VALUE` for prints, `None` for saves.
    pub fn print_line(&self) -> Option<String> {
        match self {
            Event::Print { label, text, .. } => Some(format!("{label}={text}")),
            Event::Save { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub evaluation: Evaluation,
    pub events: Vec<Event>,
}

impl RunReport {
    /// The printed value for `label`, if printed.
    pub fn printed(&self, label: &str) -> Option<&str> {
        self.events.iter().find_map(|e| match e {
            Event::Print { label: l, text, .. } if l == label => Some(text.as_str()),
            _ => None,
        })
    }
}

impl Program {
    /// Evaluates every node exactly once, then performs saves and prints in
    /// file order.
    pub fn run(&self, options: &EvalOptions) -> Result<RunReport, ScriptError> {
        let evaluation = self.evaluate(options)?;
        let events = self.perform(&evaluation)?;
        Ok(RunReport { evaluation, events })
    }

    /// Runs the side effects of the script against finished results.
    pub fn perform(&self, evaluation: &Evaluation) -> Result<Vec<Event>, ScriptError> {
        let mut events = Vec::with_capacity(self.actions().len());
        for action in self.actions() {
            match action {
                Action::Save {
                    path,
                    node,
                    location,
                } => {
                    let result = match evaluation.value(*node) {
                        Some(Value::Mask(m)) => imaging::save_png(path, m.as_ref()),
                        Some(Value::Scalar(s)) => imaging::save_png(path, s.as_ref()),
                        _ => unreachable!("save roots are valuations"),
                    };
                    result.map_err(|e| ScriptError::at(ErrorKind::Runtime, location, e.to_string()))?;
                    events.push(Event::Save {
                        path: path.clone(),
                        elapsed_ms: evaluation.finished_ms(*node),
                    });
                }
                Action::Print { label, node, .. } => events.push(Event::Print {
                    label: label.clone(),
                    text: evaluation.value(*node).map(Value::display).unwrap_or_default(),
                    elapsed_ms: evaluation.finished_ms(*node),
                }),
            }
        }
        Ok(events)
    }

    /// Computes the value of every root, in parallel where the graph allows.
    pub fn evaluate(&self, options: &EvalOptions) -> Result<Evaluation, ScriptError> {
        let mut pool = rayon::ThreadPoolBuilder::new();
        if options.threads > 0 {
            pool = pool.num_threads(options.threads);
        }
        let pool = pool.build().map_err(|e| {
            ScriptError::new(ErrorKind::Runtime, None, format!("cannot start workers: {e}"))
        })?;
        pool.install(|| Scheduler::new(self, options).run())
    }
}

struct Scheduler<'p> {
    program: &'p Program,
    ctx: Context,
    start: Instant,
    slots: Vec<Mutex<Option<Value>>>,
    pending: Vec<AtomicUsize>,
    remaining_uses: Vec<AtomicUsize>,
    consumers: Vec<Vec<NodeId>>,
    is_root: Vec<bool>,
    counts: Vec<AtomicU32>,
    finished: Vec<Mutex<f64>>,
    failure: Mutex<Option<(NodeId, ScriptError)>>,
}

impl<'p> Scheduler<'p> {
    fn new(program: &'p Program, options: &EvalOptions) -> Self {
        let graph = program.graph();
        let n = graph.len();
        let mut consumers = vec![Vec::new(); n];
        for (id, node) in graph.nodes().iter().enumerate() {
            for &a in &node.args {
                consumers[a as usize].push(id as NodeId);
            }
        }
        let mut is_root = vec![false; n];
        for &r in graph.roots() {
            is_root[r as usize] = true;
        }
        Scheduler {
            program,
            ctx: Context {
                dims: None,
                adjacency: options.adjacency,
                intensity: options.intensity,
                texture: options.texture,
            },
            start: Instant::now(),
            slots: (0..n).map(|_| Mutex::new(None)).collect(),
            pending: graph
                .nodes()
                .iter()
                .map(|node| AtomicUsize::new(node.args.len()))
                .collect(),
            remaining_uses: consumers.iter().map(|c| AtomicUsize::new(c.len())).collect(),
            consumers,
            is_root,
            counts: (0..n).map(|_| AtomicU32::new(0)).collect(),
            finished: (0..n).map(|_| Mutex::new(0.0)).collect(),
            failure: Mutex::new(None),
        }
    }

    fn run(mut self) -> Result<Evaluation, ScriptError> {
        let graph = self.program.graph();
        // Loads fix the space, so they run first and in file order.
        for &id in self.program.loads() {
            let node = graph.node(id);
            let NodeOp::Load(path) = &node.op else {
                unreachable!("load list holds load nodes")
            };
            let model = imaging::load_png(path.as_ref())
                .map_err(|e| ScriptError::at(ErrorKind::Runtime, &node.location, e.to_string()))?;
            match self.ctx.dims {
                None => self.ctx.dims = Some(model.dims()),
                Some(d) if d != model.dims() => {
                    return Err(ScriptError::at(
                        ErrorKind::Runtime,
                        &node.location,
                        format!(
                            "{path} is {} but earlier images are {d}; all images must share one space",
                            model.dims()
                        ),
                    ))
                }
                Some(_) => {}
            }
            self.counts[id as usize].fetch_add(1, Ordering::Relaxed);
            *self.slots[id as usize].lock().unwrap() = Some(Value::Model(Arc::new(model)));
        }
        let this = &self;
        rayon::scope(|s| {
            for &id in this.program.loads() {
                this.stamp(id);
                this.release_consumers(id, s);
            }
            for (id, node) in graph.nodes().iter().enumerate() {
                if node.args.is_empty() && !matches!(node.op, NodeOp::Load(_)) {
                    s.spawn(move |s| this.run_node(id as NodeId, s));
                }
            }
        });
        if let Some((_, err)) = self.failure.into_inner().unwrap() {
            return Err(err);
        }
        let mut roots = HashMap::new();
        for &r in graph.roots() {
            let v = self.slots[r as usize]
                .lock()
                .unwrap()
                .clone()
                .expect("every root completes when nothing failed");
            roots.insert(r, v);
        }
        Ok(Evaluation {
            roots,
            eval_counts: self.counts.iter().map(|c| c.load(Ordering::Relaxed)).collect(),
            finished_ms: self.finished.iter().map(|m| *m.lock().unwrap()).collect(),
            dims: self.ctx.dims,
        })
    }

    fn stamp(&self, id: NodeId) {
        *self.finished[id as usize].lock().unwrap() = self.start.elapsed().as_secs_f64() * 1e3;
    }

    fn run_node<'s>(&'s self, id: NodeId, scope: &rayon::Scope<'s>) {
        let node = self.program.graph().node(id);
        let args: Vec<Value> = node
            .args
            .iter()
            .map(|&a| {
                self.slots[a as usize]
                    .lock()
                    .unwrap()
                    .clone()
                    .expect("arguments complete before their consumers run")
            })
            .collect();
        for &a in &node.args {
            // the last reader frees intermediate results
            if self.remaining_uses[a as usize].fetch_sub(1, Ordering::AcqRel) == 1 && !self.is_root[a as usize] {
                self.slots[a as usize].lock().unwrap().take();
            }
        }
        self.counts[id as usize].fetch_add(1, Ordering::Relaxed);
        let result = match &node.op {
            NodeOp::Number(bits) => Ok(Value::Number(f64::from_bits(*bits))),
            NodeOp::Str(s) => Ok(Value::Str(s.clone())),
            NodeOp::Load(_) => unreachable!("loads run before the scope"),
            NodeOp::Builtin(prim) => builtins::apply(*prim, &args, &self.ctx)
                .map_err(|e| ScriptError::at(ErrorKind::Runtime, &node.location, e.to_string())),
        };
        let result = result.and_then(|v| {
            if v.type_tag() == node.ty {
                Ok(v)
            } else {
                Err(ScriptError::at(
                    ErrorKind::Runtime,
                    &node.location,
                    format!(
                        "internal type confusion: expected {}, produced {}",
                        node.ty,
                        v.type_tag()
                    ),
                ))
            }
        });
        match result {
            Ok(v) => {
                *self.slots[id as usize].lock().unwrap() = Some(v);
                self.stamp(id);
                self.release_consumers(id, scope);
            }
            Err(e) => {
                // Keep the lowest failing id so the report does not depend on scheduling.
                let mut failure = self.failure.lock().unwrap();
                if failure.as_ref().is_none_or(|(f, _)| id < *f) {
                    *failure = Some((id, e));
                }
            }
        }
    }

    fn release_consumers<'s>(&'s self, id: NodeId, scope: &rayon::Scope<'s>) {
        for &c in &self.consumers[id as usize] {
            if self.pending[c as usize].fetch_sub(1, Ordering::AcqRel) == 1 {
                scope.spawn(move |s| self.run_node(c, s));
            }
        }
    }
}
