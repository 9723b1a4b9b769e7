//! Command-line front end for `rstprompt`: parse, eval, export-training,
//! derive-actions and report-relations.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod oracles;

use std::fs;

use rstprompt::engine::Strategy;
use rstprompt::eval::{
    format_relation_table, format_scores, relation_csv, scores_csv, EvalOptions,
};

use crate::cli::{Cli, Command, EvalArgs};
use crate::config::RunConfig;
use crate::error::CliError;

fn write_report(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn eval_report(args: &EvalArgs) -> Result<commands::eval::EvalReport, CliError> {
    let cfg = RunConfig::resolve(args.corpus.config.as_deref(), &args.corpus.overrides())?;
    let opts = EvalOptions {
        exclude_root: args.exclude_root,
    };
    let report = commands::eval::run(&cfg, &args.pred, opts)?;
    if let Some(p) = &args.relations_csv {
        write_report(p, &relation_csv(&report.relations))?;
    }
    Ok(report)
}

/// Runs one command, printing reports to stdout.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Parse(args) => {
            let cfg = RunConfig::resolve(args.corpus.config.as_deref(), &args.overrides())?;
            let m = commands::parse::run(&cfg)?;
            println!(
                "parsed {} of {} documents ({})",
                m.parsed, m.documents, m.strategy
            );
            for (kind, c) in &m.decisions {
                println!(
                    "{kind}: {} decisions, {} queried, {} corrected",
                    c.decisions, c.queried, c.corrected
                );
            }
        }
        Command::Eval(args) => {
            let r = eval_report(&args)?;
            if let Some(p) = &args.csv {
                write_report(p, &scores_csv(&r.scores))?;
            }
            println!("documents: {}", r.documents);
            print!("{}", format_scores(&r.scores));
        }
        Command::ReportRelations(args) => {
            let r = eval_report(&args)?;
            if let Some(p) = &args.csv {
                write_report(p, &relation_csv(&r.relations))?;
            }
            print!("{}", format_relation_table(&r.relations));
        }
        Command::ExportTraining(args) => {
            let cfg = RunConfig::resolve(args.corpus.config.as_deref(), &args.overrides())?;
            let strategies = match args.strategy {
                Some(s) => vec![s],
                None => vec![Strategy::BottomUp, Strategy::TopDown],
            };
            for path in commands::export::run(&cfg, &strategies)? {
                println!("{}", path.display());
            }
        }
        Command::DeriveActions(args) => {
            let cfg = RunConfig::resolve(args.corpus.config.as_deref(), &args.overrides())?;
            let m = commands::derive::run(&cfg)?;
            println!("derived {} documents ({})", m.entries.len(), m.strategy);
        }
    }
    Ok(())
}
