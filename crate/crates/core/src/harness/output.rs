use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::ledger::TrialLedger;
use crate::codec::System;
use crate::Error;

pub const CSV_HEADER: &str =
    "system,n,k,ebn0_db,trials,block_errors,bit_errors,ber,bler,avg_queries,abandoned,undetected,seed";

fn format_ebn0(ebn0_db: f64) -> String {
    if ebn0_db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{ebn0_db:.6}")
    }
}

fn record(l: &TrialLedger) -> [String; 13] {
    [
        l.system.to_string(),
        l.n.to_string(),
        l.k.to_string(),
        format_ebn0(l.ebn0_db),
        l.trials.to_string(),
        l.block_errors.to_string(),
        l.payload_bit_errors.to_string(),
        format!("{:.6e}", l.ber()),
        format!("{:.6e}", l.bler()),
        format!("{:.6e}", l.avg_queries()),
        l.abandoned.to_string(),
        l.undetected.to_string(),
        l.seed.to_string(),
    ]
}

pub fn format_results(ledgers: &[TrialLedger]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::with_capacity(64 * (ledgers.len() + 1)));
    writer.write_record(CSV_HEADER.split(',')).unwrap();
    for l in ledgers {
        writer.write_record(record(l)).unwrap();
    }
    String::from_utf8(writer.into_inner().unwrap()).expect("CSV output is ASCII")
}

pub fn write_results(ledgers: &[TrialLedger], path: &Path) -> Result<(), Error> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, format_results(ledgers))?;
    Ok(())
}

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub system: System,
    pub n: usize,
    pub k: usize,
    pub ebn0_db: f64,
    pub trials: u64,
    pub block_errors: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub bler: f64,
    pub avg_queries: f64,
    pub abandoned: u64,
    pub undetected: u64,
    pub seed: u64,
}

pub fn parse_results(text: &str) -> Result<Vec<ResultRow>, Error> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Config(format!("unreadable results file: {e}")))?;
    if header.iter().collect::<Vec<_>>().join(",") != CSV_HEADER {
        return Err(Error::Config(
            "results file has an unexpected header".into(),
        ));
    }
    reader
        .records()
        .map(|record| {
            let record =
                record.map_err(|e| Error::Config(format!("malformed results row: {e}")))?;
            let bad = || Error::Config(format!("malformed results row {:?}", record.as_slice()));
            let field = |i: usize| record.get(i).ok_or_else(bad);
            Ok(ResultRow {
                system: field(0)?.parse()?,
                n: field(1)?.parse().map_err(|_| bad())?,
                k: field(2)?.parse().map_err(|_| bad())?,
                ebn0_db: field(3)?.parse().map_err(|_| bad())?,
                trials: field(4)?.parse().map_err(|_| bad())?,
                block_errors: field(5)?.parse().map_err(|_| bad())?,
                bit_errors: field(6)?.parse().map_err(|_| bad())?,
                ber: field(7)?.parse().map_err(|_| bad())?,
                bler: field(8)?.parse().map_err(|_| bad())?,
                avg_queries: field(9)?.parse().map_err(|_| bad())?,
                abandoned: field(10)?.parse().map_err(|_| bad())?,
                undetected: field(11)?.parse().map_err(|_| bad())?,
                seed: field(12)?.parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

/// Gnuplot script plotting BER and BLER per system from `csv_name`.
pub fn gnuplot_script(ledgers: &[TrialLedger], csv_name: &str) -> String {
    let mut systems: Vec<System> = ledgers.iter().map(|l| l.system).collect();
    systems.sort();
    systems.dedup();
    let mut script = String::new();
    script.push_str("set datafile separator ','\n");
    script.push_str("set logscale y\nset format y '10^{%L}'\nset grid\n");
    script.push_str("set xlabel 'Eb/N0 (dB)'\nset key bottom left\n");
    script.push_str("set terminal pngcairo size 1200,500\n");
    let _ = writeln!(
        script,
        "set output '{}.png'",
        csv_name.trim_end_matches(".csv")
    );
    script.push_str("set multiplot layout 1,2\n");
    for (title, column) in [("BER", 8), ("BLER", 9)] {
        let _ = writeln!(script, "set ylabel '{title}'");
        let plots: Vec<String> = systems
            .iter()
            .map(|system| {
                format!(
                    "'{csv_name}' using (strcol(1) eq '{system}' ? $4 : NaN):(${column} > 0 ? ${column} : NaN) \
                     with linespoints title '{system}'"
                )
            })
            .collect();
        let _ = writeln!(script, "plot {}", plots.join(", \\\n     "));
    }
    script.push_str("unset multiplot\n");
    script
}

/// Human-readable table with 95% Wilson intervals.
pub fn format_summary(ledgers: &[TrialLedger]) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<9} {:>4} {:>8} {:>10} {:>7} {:>11} {:>25} {:>11} {:>25} {:>11} {:>11} {:>10} {:>6} {:>7}",
        "system", "k", "Eb/N0", "trials", "errors", "BER", "BER 95%", "BLER", "BLER 95%", "cw BER", "chan BER", "avg q",
        "aband", "undet"
    );
    for l in ledgers {
        let (ber_lo, ber_hi) = l.ber_interval();
        let (bler_lo, bler_hi) = l.bler_interval();
        let _ = writeln!(
            out,
            "{:<9} {:>4} {:>8} {:>10} {:>7} {:>11.4e} [{:>10.3e}, {:>10.3e}] {:>11.4e} [{:>10.3e}, {:>10.3e}] {:>11.4e} {:>11.4e} {:>10.4} {:>6} {:>7}",
            l.system.to_string(),
            l.k,
            format_ebn0(l.ebn0_db).trim_end_matches('0').trim_end_matches('.'),
            l.trials,
            l.block_errors,
            l.ber(),
            ber_lo,
            ber_hi,
            l.bler(),
            bler_lo,
            bler_hi,
            l.codeword_ber(),
            l.channel_ber(),
            l.avg_queries(),
            l.abandoned,
            l.undetected
        );
    }
    out
}
