use super::error::{ErrorKind, Location, ScriptError};
use super::lexer::{tokenize, Tok, Token};

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number(f64),
    Str(String),
    Ident(String),
    Apply { head: String, args: Vec<Expr> },
    Infix { op: &'static str, lhs: Box<Expr>, rhs: Box<Expr> },
    Prefix { op: &'static str, arg: Box<Expr> },
    Paren(Box<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub location: Location,
}

impl Expr {
    /// Strips parentheses; handy when comparing parse shapes.
    pub fn unparen(&self) -> &Expr {
        match &self.kind {
            ExprKind::Paren(inner) => inner.unparen(),
            _ => self,
        }
    }

    /// Compact prefix rendering, e.g. `S(!(border), <.(x, 0.11))`.
    pub fn to_prefix(&self) -> String {
        match &self.kind {
            ExprKind::Number(n) => super::format_number(*n),
            ExprKind::Str(s) => format!("{s:?}"),
            ExprKind::Ident(name) => name.clone(),
            ExprKind::Apply { head, args } => format!(
                "{head}({})",
                args.iter().map(Expr::to_prefix).collect::<Vec<_>>().join(", ")
            ),
            ExprKind::Infix { op, lhs, rhs } => {
                format!("{op}({}, {})", lhs.to_prefix(), rhs.to_prefix())
            }
            ExprKind::Prefix { op, arg } => format!("{op}({})", arg.to_prefix()),
            ExprKind::Paren(inner) => inner.to_prefix(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Let {
        name: String,
        params: Vec<String>,
        body: Expr,
        location: Location,
    },
    Load {
        name: String,
        path: String,
        location: Location,
    },
    Save {
        path: String,
        expr: Expr,
        location: Location,
    },
    Print {
        label: String,
        expr: Expr,
        location: Location,
    },
    Import {
        path: String,
        location: Location,
    },
}

impl Command {
    pub fn location(&self) -> &Location {
        match self {
            Command::Let { location, .. }
            | Command::Load { location, .. }
            | Command::Save { location, .. }
            | Command::Print { location, .. }
            | Command::Import { location, .. } => location,
        }
    }
}

/// Binary precedence levels, loosest first.
const LEVELS: &[&[&str]] = &[
    &["S"],
    &["|"],
    &["&"],
    &[
        ">", "<", ">=", "<=", ">.", "<.", ">=.", "<=.", ".<.", ".>.", ".<=.", ".>=.",
    ],
    &["+.", "-.", ".+.", ".-.", "+", "-"],
    &[".*.", "./.", "*.", "*"],
];

pub fn parse_source(source: &str, file: &str) -> Result<Vec<Command>, ScriptError> {
    parse(&tokenize(source, file)?, file)
}

pub fn parse(tokens: &[Token], file: &str) -> Result<Vec<Command>, ScriptError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        file,
    };
    let mut commands = Vec::new();
    while p.pos < tokens.len() {
        commands.push(p.command()?);
    }
    Ok(commands)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    file: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Result<&'a Token, ScriptError> {
        let t = self.tokens.get(self.pos).ok_or_else(|| self.eof())?;
        self.pos += 1;
        Ok(t)
    }

    fn eof(&self) -> ScriptError {
        let location = self.tokens.last().map(|t| t.location.clone()).or_else(|| {
            Some(Location {
                file: self.file.into(),
                line: 1,
                column: 1,
            })
        });
        ScriptError::new(ErrorKind::Syntax, location, "unexpected end of input")
    }

    fn unexpected(&self, t: &Token, wanted: &str) -> ScriptError {
        ScriptError::at(
            ErrorKind::Syntax,
            &t.location,
            format!("expected {wanted}, found {}", describe(&t.tok)),
        )
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<&'a Token, ScriptError> {
        let t = self.next()?;
        if t.tok != tok {
            return Err(self.unexpected(t, wanted));
        }
        Ok(t)
    }

    fn ident(&mut self) -> Result<String, ScriptError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Ident(s) => Ok(s.clone()),
            _ => Err(self.unexpected(t, "an identifier")),
        }
    }

    fn string(&mut self) -> Result<String, ScriptError> {
        let t = self.next()?;
        match &t.tok {
            Tok::Str(s) => Ok(s.clone()),
            _ => Err(self.unexpected(t, "a string literal")),
        }
    }

    fn command(&mut self) -> Result<Command, ScriptError> {
        let t = self.next()?;
        let location = t.location.clone();
        match &t.tok {
            Tok::Let => {
                let name = self.ident()?;
                let mut params = Vec::new();
                if self.peek().is_some_and(|t| t.tok == Tok::LParen) {
                    self.pos += 1;
                    loop {
                        let at = self.peek().map(|t| t.location.clone());
                        let p = self.ident()?;
                        if params.contains(&p) {
                            return Err(ScriptError::new(
                                ErrorKind::Syntax,
                                at,
                                format!("duplicate parameter `{p}` in definition of `{name}`"),
                            ));
                        }
                        params.push(p);
                        let t = self.next()?;
                        match t.tok {
                            Tok::Comma => continue,
                            Tok::RParen => break,
                            _ => return Err(self.unexpected(t, "`,` or `)`")),
                        }
                    }
                }
                self.expect(Tok::Equals, "`=`")?;
                let body = self.expr()?;
                Ok(Command::Let {
                    name,
                    params,
                    body,
                    location,
                })
            }
            Tok::Load => {
                let name = self.ident()?;
                self.expect(Tok::Equals, "`=`")?;
                let path = self.string()?;
                Ok(Command::Load {
                    name,
                    path,
                    location,
                })
            }
            Tok::Save => {
                let path = self.string()?;
                let expr = self.expr()?;
                Ok(Command::Save {
                    path,
                    expr,
                    location,
                })
            }
            Tok::Print => {
                let label = self.string()?;
                let expr = self.expr()?;
                Ok(Command::Print {
                    label,
                    expr,
                    location,
                })
            }
            Tok::Import => {
                let path = self.string()?;
                Ok(Command::Import { path, location })
            }
            _ => Err(self.unexpected(t, "a command (let, load, save, print, import)")),
        }
    }

    pub fn expr(&mut self) -> Result<Expr, ScriptError> {
        self.binary(0)
    }

    fn binary(&mut self, level: usize) -> Result<Expr, ScriptError> {
        if level == LEVELS.len() {
            return self.prefix();
        }
        let mut lhs = self.binary(level + 1)?;
        while let Some(Token {
            tok: Tok::Op(op),
            location,
        }) = self.peek()
        {
            if !LEVELS[level].contains(op) {
                break;
            }
            self.pos += 1;
            let rhs = self.binary(level + 1)?;
            lhs = Expr {
                kind: ExprKind::Infix {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                location: location.clone(),
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expr, ScriptError> {
        if let Some(Token {
            tok: Tok::Op("!"),
            location,
        }) = self.peek()
        {
            self.pos += 1;
            let arg = self.prefix()?;
            return Ok(Expr {
                kind: ExprKind::Prefix {
                    op: "!",
                    arg: Box::new(arg),
                },
                location: location.clone(),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr, ScriptError> {
        let t = self.next()?;
        let location = t.location.clone();
        let kind = match &t.tok {
            Tok::Number(n) => ExprKind::Number(*n),
            Tok::Str(s) => ExprKind::Str(s.clone()),
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                ExprKind::Paren(Box::new(inner))
            }
            Tok::Ident(name) => {
                if self.peek().is_some_and(|t| t.tok == Tok::LParen) {
                    self.pos += 1;
                    let mut args = Vec::new();
                    if self.peek().is_some_and(|t| t.tok == Tok::RParen) {
                        self.pos += 1;
                    } else {
                        loop {
                            args.push(self.expr()?);
                            let t = self.next()?;
                            match t.tok {
                                Tok::Comma => continue,
                                Tok::RParen => break,
                                _ => return Err(self.unexpected(t, "`,` or `)`")),
                            }
                        }
                    }
                    ExprKind::Apply {
                        head: name.clone(),
                        args,
                    }
                } else {
                    ExprKind::Ident(name.clone())
                }
            }
            _ => return Err(self.unexpected(t, "an expression")),
        };
        Ok(Expr { kind, location })
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Let => "`let`".into(),
        Tok::Load => "`load`".into(),
        Tok::Save => "`save`".into(),
        Tok::Print => "`print`".into(),
        Tok::Import => "`import`".into(),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Number(n) => format!("number {n}"),
        Tok::Str(s) => format!("string {s:?}"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Equals => "`=`".into(),
        Tok::Op(op) => format!("operator `{op}`"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn body(src: &str) -> String {
        match &parse_source(src, "t").unwrap()[0] {
            Command::Let { body, .. } => body.to_prefix(),
            other => panic!("not a let: {other:?}"),
        }
    }

    #[test]
    fn surrounded_with_parentheses() {
        assert_eq!(
            body("let preSeg = (!border) S (bgSimScore <. 0.11)"),
            "S(!(border), <.(bgSimScore, 0.11))"
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(body("let x = a & b | c"), "|(&(a, b), c)");
        assert_eq!(body("let x = a | b & c"), "|(a, &(b, c))");
        assert_eq!(body("let x = !a & b"), "&(!(a), b)");
        assert_eq!(body("let x = a S b | c"), "S(a, |(b, c))");
        assert_eq!(body("let x = 1 .-. 2 .-. 3"), ".-.(.-.(1, 2), 3)");
        assert_eq!(body("let x = 1 .+. 2 .*. 3"), ".+.(1, .*.(2, 3))");
        assert_eq!(body("let x = i <. 40 & j >. 2 .*. 3"), "&(<.(i, 40), >.(j, .*.(2, 3)))");
    }

    #[test]
    fn function_definitions() {
        let cmds = parse_source("let grow(a,b) = (a | touch(b,a))", "t").unwrap();
        match &cmds[0] {
            Command::Let { name, params, body, .. } => {
                assert_eq!(name, "grow");
                assert_eq!(params.len(), 2);
                assert_eq!(body.to_prefix(), "|(a, touch(b, a))");
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn all_commands() {
        let src = r#"
            import "stdlib.imgql"
            load img = "$INPUTDIR/a.png"
            let f = intensity(img)
            save "out.png" f >. 3
            print "v" volume(tt)
        "#;
        let cmds = parse_source(src, "t").unwrap();
        assert!(matches!(cmds[0], Command::Import { .. }));
        assert!(matches!(cmds[1], Command::Load { .. }));
        assert!(matches!(cmds[3], Command::Save { .. }));
        assert!(matches!(cmds[4], Command::Print { .. }));
        assert_eq!(cmds[4].location().line, 6);
    }

    #[test]
    fn expressions_span_lines() {
        let src = "let p = (b > (r +. 30)) &\n  (b > g)\nlet q = p";
        let cmds = parse_source(src, "t").unwrap();
        assert_eq!(cmds.len(), 2);
    }

    #[test]
    fn syntax_errors() {
        let e = parse_source("let f(x, x) = x", "t").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        assert!(e.message.contains("duplicate parameter"));
        let e = parse_source("let a = (b & c", "t").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
        let e = parse_source("save outpng x", "t").unwrap_err();
        assert!(e.message.contains("string literal"), "{e}");
        let e = parse_source("let a = b &\nlet c = d", "t").unwrap_err();
        assert_eq!(e.location.unwrap().line, 2);
    }
}
