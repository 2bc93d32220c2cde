use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::builtins::{self, Prim, Resolution};
use super::error::{ErrorKind, Location, ScriptError};
use super::parser::{parse_source, Command, Expr, ExprKind};
use super::types::TypeTag;
use super::vars::{substitute_vars, Bindings};

pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NodeOp {
    /// A numeric literal, stored as its bit pattern so that it can be hashed.
    Number(u64),
    Str(Arc<str>),
    /// A `load` with its path already substituted.
    Load(Arc<str>),
    Builtin(Prim),
}

#[derive(Clone, Debug)]
pub struct Node {
    pub op: NodeOp,
    pub args: Vec<NodeId>,
    pub ty: TypeTag,
    /// Where the node was first produced.
    pub location: Location,
}

/// A hash-consed expression DAG. Every argument id is smaller than the id
/// of the node using it.
#[derive(Clone, Debug, Default)]
pub struct ExprGraph {
    nodes: Vec<Node>,
    index: HashMap<(NodeOp, Vec<NodeId>), NodeId>,
    roots: Vec<NodeId>,
}

impl ExprGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id as usize]
    }

    /// Ids demanded by `save` and `print`, without duplicates, in file order.
    pub fn roots(&self) -> &[NodeId] {
        &self.roots
    }

    fn intern(&mut self, op: NodeOp, args: Vec<NodeId>, ty: TypeTag, location: &Location) -> NodeId {
        let key = (op, args);
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node {
            op: key.0.clone(),
            args: key.1.clone(),
            ty,
            location: location.clone(),
        });
        self.index.insert(key, id);
        id
    }

    fn add_root(&mut self, id: NodeId) {
        if !self.roots.contains(&id) {
            self.roots.push(id);
        }
    }

    fn head(&self, id: NodeId) -> String {
        match &self.node(id).op {
            NodeOp::Number(bits) => super::format_number(f64::from_bits(*bits)),
            NodeOp::Str(s) => format!("{s:?}"),
            NodeOp::Load(p) => format!("load({p:?})"),
            NodeOp::Builtin(prim) => builtins::builtin_table()
                .iter()
                .find(|b| b.prim == *prim)
                .map_or("?", |b| b.name)
                .to_string(),
        }
    }

    /// Node `id` as a full prefix expression.
    pub fn render(&self, id: NodeId) -> String {
        let node = self.node(id);
        if node.args.is_empty() {
            return self.head(id);
        }
        let args: Vec<String> = node.args.iter().map(|&a| self.render(a)).collect();
        format!("{}({})", self.head(id), args.join(", "))
    }

    /// Node `id` with its arguments as `#uid` references.
    pub fn label(&self, id: NodeId) -> String {
        let node = self.node(id);
        if node.args.is_empty() {
            return self.head(id);
        }
        let args: Vec<String> = node.args.iter().map(|a| format!("#{a}")).collect();
        format!("{}({})", self.head(id), args.join(", "))
    }
}

/// A side effect requested by the script, in file order.
#[derive(Clone, Debug, PartialEq)]
pub enum Action {
    Save {
        path: String,
        node: NodeId,
        location: Location,
    },
    Print {
        label: String,
        node: NodeId,
        location: Location,
    },
}

/// Where `import "file"` looks: the importing file's directory, then each
/// search directory, then the embedded sources.
#[derive(Clone, Debug, Default)]
pub struct ImportResolver {
    search: Vec<PathBuf>,
    embedded: BTreeMap<String, Arc<str>>,
}

impl ImportResolver {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_search_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.search.push(dir.into());
        self
    }

    pub fn with_embedded(mut self, name: impl Into<String>, source: impl Into<Arc<str>>) -> Self {
        self.embedded.insert(name.into(), source.into());
        self
    }

    fn resolve(&self, name: &str, from: Option<&Path>) -> Option<Source> {
        let dirs = from.into_iter().chain(self.search.iter().map(PathBuf::as_path));
        for dir in dirs {
            let candidate = dir.join(name);
            if let Ok(text) = std::fs::read_to_string(&candidate) {
                let key = candidate.canonicalize().unwrap_or_else(|_| candidate.clone());
                return Some(Source {
                    key: key.display().to_string(),
                    display: candidate.display().to_string(),
                    dir: candidate.parent().map(Path::to_path_buf),
                    text: text.into(),
                });
            }
        }
        self.embedded.get(name).map(|text| Source {
            key: format!("<embedded>/{name}"),
            display: format!("<embedded>/{name}"),
            dir: None,
            text: text.clone(),
        })
    }
}

struct Source {
    key: String,
    display: String,
    dir: Option<PathBuf>,
    text: Arc<str>,
}

#[derive(Clone, Debug)]
enum Entry {
    Def {
        name: String,
        params: Vec<String>,
        body: Arc<Expr>,
    },
    Load {
        name: String,
        node: NodeId,
    },
}

impl Entry {
    fn name(&self) -> &str {
        match self {
            Entry::Def { name, .. } | Entry::Load { name, .. } => name,
        }
    }
}

struct Scope<'a> {
    /// Only entries before this index are visible.
    upto: usize,
    params: &'a HashMap<String, NodeId>,
    /// The definition being expanded, if any.
    current: Option<&'a str>,
}

#[derive(Clone, Debug, Default)]
struct Expander {
    graph: ExprGraph,
    entries: Vec<Entry>,
    memo: HashMap<(usize, Vec<NodeId>), NodeId>,
    /// Expansion stack of definitions, for error messages.
    depth: usize,
}

const MAX_DEPTH: usize = 512;

impl Expander {
    fn lookup(&self, name: &str, upto: usize) -> Option<usize> {
        self.entries[..upto].iter().rposition(|e| e.name() == name)
    }

    fn expand(&mut self, expr: &Expr, scope: &Scope<'_>) -> Result<NodeId, ScriptError> {
        let loc = &expr.location;
        match &expr.kind {
            ExprKind::Number(n) => Ok(self
                .graph
                .intern(NodeOp::Number(n.to_bits()), vec![], TypeTag::Number, loc)),
            ExprKind::Str(s) => Ok(self.graph.intern(
                NodeOp::Str(s.as_str().into()),
                vec![],
                TypeTag::String,
                loc,
            )),
            ExprKind::Paren(inner) => self.expand(inner, scope),
            ExprKind::Ident(name) => self.apply(name, &[], false, loc, scope),
            ExprKind::Apply { head, args } => self.apply(head, args, true, loc, scope),
            ExprKind::Infix { op, lhs, rhs } => {
                let args = [self.expand(lhs, scope)?, self.expand(rhs, scope)?];
                self.builtin(op, &args, loc)
            }
            ExprKind::Prefix { op, arg } => {
                let args = [self.expand(arg, scope)?];
                self.builtin(op, &args, loc)
            }
        }
    }

    fn apply(
        &mut self,
        name: &str,
        args: &[Expr],
        call: bool,
        loc: &Location,
        scope: &Scope<'_>,
    ) -> Result<NodeId, ScriptError> {
        if let Some(&id) = scope.params.get(name) {
            if call {
                return Err(ScriptError::at(
                    ErrorKind::Type,
                    loc,
                    format!("parameter `{name}` is not a function"),
                ));
            }
            return Ok(id);
        }
        if scope.current == Some(name) {
            return Err(ScriptError::at(
                ErrorKind::UnboundIdentifier,
                loc,
                format!("`{name}` refers to itself; recursive definitions are not supported"),
            ));
        }
        let arg_ids = args
            .iter()
            .map(|a| self.expand(a, scope))
            .collect::<Result<Vec<_>, _>>()?;
        let Some(index) = self.lookup(name, scope.upto) else {
            if builtins::is_builtin(name) {
                return self.builtin(name, &arg_ids, loc);
            }
            return Err(ScriptError::at(
                ErrorKind::UnboundIdentifier,
                loc,
                format!("`{name}` is not defined"),
            ));
        };
        match self.entries[index].clone() {
            Entry::Load { node, .. } => {
                if !arg_ids.is_empty() {
                    return Err(ScriptError::at(
                        ErrorKind::Arity,
                        loc,
                        format!("`{name}` is an image and takes no arguments"),
                    ));
                }
                Ok(node)
            }
            Entry::Def { params, body, .. } => {
                if params.len() != arg_ids.len() {
                    return Err(ScriptError::at(
                        ErrorKind::Arity,
                        loc,
                        format!(
                            "`{name}` expects {} argument(s), got {}",
                            params.len(),
                            arg_ids.len()
                        ),
                    ));
                }
                let key = (index, arg_ids);
                if let Some(&id) = self.memo.get(&key) {
                    return Ok(id);
                }
                if self.depth >= MAX_DEPTH {
                    return Err(ScriptError::at(
                        ErrorKind::Syntax,
                        loc,
                        "definitions nest too deeply",
                    ));
                }
                let bound: HashMap<String, NodeId> =
                    params.iter().cloned().zip(key.1.iter().copied()).collect();
                self.depth += 1;
                let result = self.expand(
                    &body,
                    &Scope {
                        upto: index,
                        params: &bound,
                        current: Some(name),
                    },
                );
                self.depth -= 1;
                let id = result?;
                self.memo.insert(key, id);
                Ok(id)
            }
        }
    }

    fn builtin(&mut self, name: &str, args: &[NodeId], loc: &Location) -> Result<NodeId, ScriptError> {
        let types: Vec<TypeTag> = args.iter().map(|&a| self.graph.node(a).ty).collect();
        match builtins::resolve(name, &types) {
            Resolution::Found(b) => Ok(self
                .graph
                .intern(NodeOp::Builtin(b.prim), args.to_vec(), b.result, loc)),
            Resolution::Unknown => Err(ScriptError::at(
                ErrorKind::UnboundIdentifier,
                loc,
                format!("`{name}` is not defined"),
            )),
            Resolution::Arity(arities) => Err(ScriptError::at(
                ErrorKind::Arity,
                loc,
                format!(
                    "`{name}` expects {} argument(s), got {}",
                    arities
                        .iter()
                        .map(|a| a.to_string())
                        .collect::<Vec<_>>()
                        .join(" or "),
                    args.len()
                ),
            )),
            Resolution::Type(candidates) => {
                let got: Vec<String> = types.iter().map(|t| t.to_string()).collect();
                let wanted: Vec<String> = candidates.iter().map(|b| builtins::signature(b)).collect();
                Err(ScriptError::at(
                    ErrorKind::Type,
                    loc,
                    format!(
                        "`{name}` cannot be applied to ({}); expected {}",
                        got.join(", "),
                        wanted.join(" or ")
                    ),
                ))
            }
        }
    }
}

/// A checked script: the expression graph plus the side effects to run.
#[derive(Clone, Debug)]
pub struct Program {
    expander: Expander,
    actions: Vec<Action>,
    loads: Vec<NodeId>,
}

impl Program {
    /// Parses, resolves imports, expands and type-checks a script.
    ///
    /// `dir` is the directory imports are resolved against first.
    pub fn compile(
        source: &str,
        file: &str,
        dir: Option<&Path>,
        bindings: &Bindings,
        resolver: &ImportResolver,
    ) -> Result<Program, ScriptError> {
        let mut builder = Builder {
            bindings,
            resolver,
            expander: Expander::default(),
            actions: Vec::new(),
            loads: Vec::new(),
            imported: HashSet::new(),
            stack: Vec::new(),
        };
        builder.file(source, file, dir, false)?;
        Ok(Program {
            expander: builder.expander,
            actions: builder.actions,
            loads: builder.loads,
        })
    }

    /// Reads and compiles a script file.
    pub fn from_file(
        path: impl AsRef<Path>,
        bindings: &Bindings,
        resolver: &ImportResolver,
    ) -> Result<Program, ScriptError> {
        let path = path.as_ref();
        let source = std::fs::read_to_string(path).map_err(|e| {
            ScriptError::new(
                ErrorKind::Import,
                None,
                format!("cannot read {}: {e}", path.display()),
            )
        })?;
        Program::compile(
            &source,
            &path.display().to_string(),
            path.parent(),
            bindings,
            resolver,
        )
    }

    pub fn graph(&self) -> &ExprGraph {
        &self.expander.graph
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Load nodes in file order.
    pub fn loads(&self) -> &[NodeId] {
        &self.loads
    }

    /// The id an expression would have when written at the end of the
    /// script, or `None` if the graph holds no such node.
    pub fn find_expr(&self, source: &str) -> Result<Option<NodeId>, ScriptError> {
        let commands = parse_source(&format!("print \"probe\" {source}"), "<probe>")?;
        let Some(Command::Print { expr, .. }) = commands.first() else {
            return Ok(None);
        };
        let mut scratch = self.expander.clone();
        let before = scratch.graph.len();
        let id = scratch.expand(
            expr,
            &Scope {
                upto: scratch.entries.len(),
                params: &HashMap::new(),
                current: None,
            },
        )?;
        Ok(((id as usize) < before).then_some(id))
    }

    /// The node bound to a top-level name with no parameters, if it was
    /// demanded by some root.
    pub fn find_name(&self, name: &str) -> Option<NodeId> {
        let index = self.expander.lookup(name, self.expander.entries.len())?;
        match &self.expander.entries[index] {
            Entry::Load { node, .. } => Some(*node),
            Entry::Def { .. } => self.expander.memo.get(&(index, vec![])).copied(),
        }
    }
}

struct Builder<'a> {
    bindings: &'a Bindings,
    resolver: &'a ImportResolver,
    expander: Expander,
    actions: Vec<Action>,
    loads: Vec<NodeId>,
    imported: HashSet<String>,
    stack: Vec<String>,
}

impl Builder<'_> {
    fn file(
        &mut self,
        source: &str,
        file: &str,
        dir: Option<&Path>,
        imported: bool,
    ) -> Result<(), ScriptError> {
        for command in parse_source(source, file)? {
            match command {
                Command::Let {
                    name, params, body, ..
                } => self.expander.entries.push(Entry::Def {
                    name,
                    params,
                    body: Arc::new(body),
                }),
                Command::Import { path, location } => self.import(&path, &location, dir)?,
                Command::Load {
                    location,
                    ..
                }
                | Command::Save { location, .. }
                | Command::Print { location, .. }
                    if imported =>
                {
                    return Err(ScriptError::at(
                        ErrorKind::Import,
                        &location,
                        "imported files may only contain `let` and `import`",
                    ));
                }
                Command::Load {
                    name,
                    path,
                    location,
                } => {
                    let path = self.substitute(&path, &location)?;
                    let node = self.expander.graph.intern(
                        NodeOp::Load(path.into()),
                        vec![],
                        TypeTag::Model,
                        &location,
                    );
                    if !self.loads.contains(&node) {
                        self.loads.push(node);
                    }
                    self.expander.entries.push(Entry::Load { name, node });
                }
                Command::Save {
                    path,
                    expr,
                    location,
                } => {
                    let path = self.substitute(&path, &location)?;
                    let node = self.root(&expr)?;
                    let ty = self.expander.graph.node(node).ty;
                    if !ty.is_valuation() {
                        return Err(ScriptError::at(
                            ErrorKind::Type,
                            &location,
                            format!("save requires a Valuation(Bool) or Valuation(Number), got {ty}"),
                        ));
                    }
                    self.actions.push(Action::Save {
                        path,
                        node,
                        location,
                    });
                }
                Command::Print {
                    label,
                    expr,
                    location,
                } => {
                    let node = self.root(&expr)?;
                    let ty = self.expander.graph.node(node).ty;
                    if !matches!(ty, TypeTag::Number | TypeTag::Bool | TypeTag::String) {
                        return Err(ScriptError::at(
                            ErrorKind::Type,
                            &location,
                            format!("print requires a Number, Bool or String, got {ty}"),
                        ));
                    }
                    self.actions.push(Action::Print {
                        label,
                        node,
                        location,
                    });
                }
            }
        }
        Ok(())
    }

    fn substitute(&self, literal: &str, location: &Location) -> Result<String, ScriptError> {
        substitute_vars(literal, self.bindings).map_err(|mut e| {
            e.location = Some(location.clone());
            e
        })
    }

    fn root(&mut self, expr: &Expr) -> Result<NodeId, ScriptError> {
        let upto = self.expander.entries.len();
        let node = self.expander.expand(
            expr,
            &Scope {
                upto,
                params: &HashMap::new(),
                current: None,
            },
        )?;
        self.expander.graph.add_root(node);
        Ok(node)
    }

    fn import(&mut self, name: &str, location: &Location, dir: Option<&Path>) -> Result<(), ScriptError> {
        let Some(source) = self.resolver.resolve(name, dir) else {
            return Err(ScriptError::at(
                ErrorKind::Import,
                location,
                format!("cannot find import {name:?}"),
            ));
        };
        if self.stack.contains(&source.key) {
            return Err(ScriptError::at(
                ErrorKind::Import,
                location,
                format!("import cycle through {}", source.display),
            ));
        }
        if !self.imported.insert(source.key.clone()) {
            return Ok(());
        }
        self.stack.push(source.key.clone());
        let result = self.file(&source.text, &source.display, source.dir.as_deref(), true);
        self.stack.pop();
        result
    }
}
