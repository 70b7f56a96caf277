use std::fmt::Write;

use super::ast::*;

/// Renders a program back to `.imp` source. Parsing the output yields a
/// structurally identical program.
pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    for g in &p.globals {
        out.push_str(&decl_text(&g.name, g.size.as_ref(), g.init.as_ref()));
        out.push_str(";\n");
    }
    if !p.globals.is_empty() {
        out.push('\n');
    }
    for (i, f) in p.functions.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let params: Vec<String> = f.params.iter().map(|p| format!("int {p}")).collect();
        let _ = writeln!(out, "func {}({}) {{", f.name, params.join(", "));
        print_block(&mut out, &f.body, 1);
        out.push_str("}\n");
    }
    for ea in &p.end_assumes {
        let _ = writeln!(out, "\nassume_at_end({});", print_expr(&ea.cond));
    }
    out
}

fn decl_text(name: &str, size: Option<&Expr>, init: Option<&Expr>) -> String {
    match (size, init) {
        (Some(size), _) => format!("int {name}[{}]", print_expr(size)),
        (None, Some(init)) => format!("int {name} = {}", print_expr(init)),
        (None, None) => format!("int {name}"),
    }
}

fn indent(out: &mut String, level: usize) {
    for _ in 0..level {
        out.push_str("  ");
    }
}

fn print_block(out: &mut String, block: &[Stmt], level: usize) {
    for s in block {
        print_stmt(out, s, level);
    }
}

/// Statement text without the trailing `;` for the forms usable in a `for`
/// header.
fn simple_text(s: &Stmt) -> String {
    match &s.kind {
        StmtKind::Decl { name, size, init } => decl_text(name, size.as_ref(), init.as_ref()),
        StmtKind::Assign { target, value } => match target {
            LValue::Var(n) => format!("{n} = {}", print_expr(value)),
            LValue::Index(n, i) => format!("{n}[{}] = {}", print_expr(i), print_expr(value)),
        },
        StmtKind::Call { dest, func, args } => {
            let args: Vec<String> = args.iter().map(print_expr).collect();
            match dest {
                Some(d) => format!("{d} = {func}({})", args.join(", ")),
                None => format!("{func}({})", args.join(", ")),
            }
        }
        StmtKind::Havoc(n) => format!("{n} = havoc()"),
        StmtKind::Return(Some(e)) => format!("return {}", print_expr(e)),
        StmtKind::Return(None) => "return".to_string(),
        StmtKind::Assert(e) => format!("assert({})", print_expr(e)),
        StmtKind::Assume(e) => format!("assume({})", print_expr(e)),
        StmtKind::Log(l) => format!("log(\"{l}\")"),
        StmtKind::If { .. } | StmtKind::While { .. } | StmtKind::For { .. } => String::new(),
    }
}

fn print_stmt(out: &mut String, s: &Stmt, level: usize) {
    indent(out, level);
    match &s.kind {
        StmtKind::If {
            cond,
            then_branch,
            else_branch,
        } => {
            let _ = writeln!(out, "if ({}) {{", print_expr(cond));
            print_block(out, then_branch, level + 1);
            indent(out, level);
            if else_branch.is_empty() {
                out.push_str("}\n");
            } else {
                out.push_str("} else {\n");
                print_block(out, else_branch, level + 1);
                indent(out, level);
                out.push_str("}\n");
            }
        }
        StmtKind::While { cond, body } => {
            let _ = writeln!(out, "while ({}) {{", print_expr(cond));
            print_block(out, body, level + 1);
            indent(out, level);
            out.push_str("}\n");
        }
        StmtKind::For {
            init,
            cond,
            step,
            body,
        } => {
            let init = init.as_deref().map(simple_text).unwrap_or_default();
            let step = step.as_deref().map(simple_text).unwrap_or_default();
            let _ = writeln!(out, "for ({init}; {}; {step}) {{", print_expr(cond));
            print_block(out, body, level + 1);
            indent(out, level);
            out.push_str("}\n");
        }
        _ => {
            out.push_str(&simple_text(s));
            out.push_str(";\n");
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e, 0);
    out
}

fn write_expr(out: &mut String, e: &Expr, min_prec: u8) {
    match e {
        Expr::Int(v) if *v == i64::MIN => out.push_str("(-9223372036854775807 - 1)"),
        Expr::Int(v) if *v < 0 => {
            let _ = write!(out, "(-{})", v.unsigned_abs());
        }
        Expr::Int(v) => {
            let _ = write!(out, "{v}");
        }
        Expr::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Expr::Var(v) => out.push_str(v),
        Expr::Index(a, i) => {
            out.push_str(a);
            out.push('[');
            write_expr(out, i, 0);
            out.push(']');
        }
        Expr::Unary(op, inner) => {
            out.push(match op {
                UnOp::Neg => '-',
                UnOp::Not => '!',
            });
            // operand of a unary operator binds tighter than any binary one
            write_expr(out, inner, 7);
        }
        Expr::Binary(op, l, r) => {
            let prec = op.precedence();
            let paren = prec < min_prec;
            if paren {
                out.push('(');
            }
            write_expr(out, l, prec);
            let _ = write!(out, " {} ", op.symbol());
            write_expr(out, r, prec + 1);
            if paren {
                out.push(')');
            }
        }
    }
}
