//! File formats and output plumbing for the command line tool.

use std::fs;
use std::path::Path;

use admg::graph::{parse_graph, parse_graph_json, GraphJson, ParsedGraph};
use admg::{Admg, Error, Imset, Result};
use nalgebra::DMatrix;

/// Reads a graph file; JSON when the extension is `.json` or the text starts
/// with `{`.
pub fn read_graph(path: &Path) -> Result<ParsedGraph> {
    let text = read_text(path)?;
    let json = path.extension().is_some_and(|e| e == "json") || text.trim_start().starts_with('{');
    let parsed = if json {
        parse_graph_json(&text)
    } else {
        parse_graph(&text)
    };
    parsed.map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {}: {e}", path.display())))
}

pub fn graph_to_json(g: &Admg) -> String {
    serde_json::to_string_pretty(&GraphJson::from_graph(g, None)).expect("graph serializes")
}

/// Rounds to 12 significant digits and prints the shortest form of the
/// result.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".into()
    } else {
        rounded.to_string()
    }
}

/// A numeric table with a header row of names. Lines starting with `#` are
/// comments.
pub struct Table {
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn read_table(path: &Path) -> Result<Table> {
    let text = read_text(path)?;
    parse_table(&text).map_err(|e| Error::Precondition(format!("{}: {e}", path.display())))
}

pub fn parse_table(text: &str) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let names: Vec<String> = rdr
        .headers()
        .map_err(|e| csv_err(&e))?
        .iter()
        .map(str::to_string)
        .collect();
    if names.is_empty() || names.iter().any(String::is_empty) {
        return Err(Error::Parse {
            line: 1,
            msg: "header must name every column".into(),
        });
    }
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(&e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != names.len() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} fields, found {}", names.len(), rec.len()),
            });
        }
        let row = rec
            .iter()
            .map(|f| {
                f.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| Error::Parse {
                    line,
                    msg: format!("not a finite number: `{f}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { names, rows })
}

fn csv_err(e: &csv::Error) -> Error {
    Error::Parse {
        line: e.position().map_or(0, |p| p.line() as usize),
        msg: e.to_string(),
    }
}

impl Table {
    /// Column indices of the table in the order of `names`.
    pub fn columns_for(&self, names: &[String]) -> Result<Vec<usize>> {
        if self.names.len() != names.len() {
            return Err(Error::Precondition(format!(
                "table has {} columns, graph has {} vertices",
                self.names.len(),
                names.len()
            )));
        }
        names
            .iter()
            .map(|n| {
                self.names
                    .iter()
                    .position(|x| x == n)
                    .ok_or_else(|| Error::Precondition(format!("no column named `{n}`")))
            })
            .collect()
    }

    /// Rows as a matrix with columns reordered to `names`.
    pub fn matrix(&self, names: &[String]) -> Result<DMatrix<f64>> {
        let cols = self.columns_for(names)?;
        Ok(DMatrix::from_fn(self.rows.len(), cols.len(), |i, j| self.rows[i][cols[j]]))
    }

    /// A square covariance table, rows in header order, reordered to `names`.
    pub fn covariance(&self, names: &[String]) -> Result<DMatrix<f64>> {
        if self.rows.len() != self.names.len() {
            return Err(Error::Precondition(format!(
                "covariance needs {} rows, found {}",
                self.names.len(),
                self.rows.len()
            )));
        }
        let cols = self.columns_for(names)?;
        Ok(DMatrix::from_fn(cols.len(), cols.len(), |i, j| self.rows[cols[i]][cols[j]]))
    }
}

/// Builds CSV text with a header.
pub struct Csv {
    w: csv::Writer<Vec<u8>>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(header).expect("write to memory");
        Csv { w }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.w.write_record(fields).expect("write to memory");
    }

    pub fn finish(self) -> String {
        String::from_utf8(self.w.into_inner().expect("flush to memory")).expect("utf-8")
    }
}

pub fn imset_csv(g: &Admg, u: &Imset, all: bool) -> String {
    let mut c = Csv::new(&["subset", "value"]);
    for s in g.all().subsets() {
        let v = u.get(s);
        if all || v != 0 {
            c.row([g.fmt_set(s), v.to_string()]);
        }
    }
    c.finish()
}

/// Reads the `subset,value` format written by [`imset_csv`]. Missing subsets
/// are zero.
#[cfg(test)]
pub fn parse_imset_csv(g: &Admg, text: &str) -> Result<Imset> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut u = Imset::zero(g.n());
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_err(&e))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let bad = |msg: String| Error::Parse { line, msg };
        if rec.len() != 2 {
            return Err(bad("expected `subset,value`".into()));
        }
        let s = g.set_from_names(&rec[0]).map_err(|e| bad(e.to_string()))?;
        let v: i64 = rec[1]
            .trim()
            .parse()
            .map_err(|_| bad(format!("not an integer: `{}`", &rec[1])))?;
        u.set(s, v);
    }
    Ok(u)
}

/// Named outputs of one command.
#[derive(Default)]
pub struct Output {
    files: Vec<(String, String)>,
}

impl Output {
    pub fn add(&mut self, name: &str, content: String) {
        self.files.push((name.to_string(), content));
    }

    /// Writes every file into `dir`, or prints them to stdout. Several
    /// outputs on stdout are each preceded by a `# name` line.
    pub fn emit(self, dir: Option<&Path>) -> Result<()> {
        match dir {
            Some(d) => {
                fs::create_dir_all(d).map_err(|e| {
                    Error::Precondition(format!("cannot create {}: {e}", d.display()))
                })?;
                for (name, content) in &self.files {
                    let p = d.join(name);
                    fs::write(&p, content).map_err(|e| {
                        Error::Precondition(format!("cannot write {}: {e}", p.display()))
                    })?;
                }
            }
            None if self.files.len() == 1 => print!("{}", self.files[0].1),
            None => {
                for (i, (name, content)) in self.files.iter().enumerate() {
                    if i > 0 {
                        println!();
                    }
                    println!("# {name}");
                    print!("{content}");
                }
            }
        }
        Ok(())
    }
}
