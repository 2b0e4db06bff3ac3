//! Edge-list file format.
//!
//! ```text
//! # wdfa n=<n> m=<m> sigma=<sigma> seed=<seed>
//! <source>\t<label>\t<dest>
//! ...
//! ```
//!
//! One line per transition, 1-based decimal, LF endings, in emission order
//! (ascending `(label, source)`). On non-seekable outputs a rejected attempt
//! is followed by `# restart` and the accepted one ends with `# commit`;
//! readers keep only the edges after the last `# restart`.

use std::fs::File;
use std::io::{self, BufRead, BufWriter, Seek, SeekFrom, Write};

use thiserror::Error;

use crate::automaton::{Automaton, Transition};
use crate::stream::Sink;

pub const RESTART_LINE: &str = "# restart";
pub const COMMIT_LINE: &str = "# commit";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub n: u64,
    pub m: u64,
    pub sigma: u64,
    pub seed: Option<u64>,
}

impl Header {
    pub fn write_to<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        write!(w, "# wdfa n={} m={} sigma={}", self.n, self.m, self.sigma)?;
        if let Some(seed) = self.seed {
            write!(w, " seed={seed}")?;
        }
        w.write_all(b"\n")
    }

    pub fn parse(line: &str) -> Result<Self, String> {
        let rest = line.strip_prefix("# wdfa").ok_or("header must start with `# wdfa`")?;
        let (mut n, mut m, mut sigma, mut seed) = (None, None, None, None);
        for field in rest.split_whitespace() {
            let (key, value) = field.split_once('=').ok_or_else(|| format!("malformed header field `{field}`"))?;
            let value: u64 = value.parse().map_err(|_| format!("header field `{key}` is not an integer"))?;
            let slot = match key {
                "n" => &mut n,
                "m" => &mut m,
                "sigma" => &mut sigma,
                "seed" => &mut seed,
                other => return Err(format!("unknown header field `{other}`")),
            };
            if slot.replace(value).is_some() {
                return Err(format!("duplicate header field `{key}`"));
            }
        }
        Ok(Header {
            n: n.ok_or("header lacks n")?,
            m: m.ok_or("header lacks m")?,
            sigma: sigma.ok_or("header lacks sigma")?,
            seed,
        })
    }
}

pub fn write_edge<W: Write + ?Sized>(w: &mut W, t: &Transition) -> io::Result<()> {
    writeln!(w, "{}\t{}\t{}", t.source, t.label, t.dest)
}

/// Writes a whole automaton with its header.
pub fn write_edge_list<W: Write + ?Sized>(w: &mut W, header: &Header, ts: &[Transition]) -> io::Result<()> {
    header.write_to(w)?;
    for t in ts {
        write_edge(w, t)?;
    }
    Ok(())
}

/// Graphviz rendering for human inspection.
pub fn write_dot<W: Write + ?Sized>(w: &mut W, header: &Header, a: &Automaton) -> io::Result<()> {
    writeln!(w, "digraph wdfa {{")?;
    write!(w, "  // ")?;
    header.write_to(w)?;
    writeln!(w, "  rankdir=LR;")?;
    writeln!(w, "  node [shape=circle];")?;
    for v in 1..=a.n() {
        writeln!(w, "  {v};")?;
    }
    for t in a.transitions() {
        writeln!(w, "  {} -> {} [label=\"{}\"];", t.source, t.dest, t.label)?;
    }
    writeln!(w, "}}")
}

/// Seekable file sink: a restart truncates the file back to the end of the
/// header.
#[derive(Debug)]
pub struct FileSink {
    out: BufWriter<File>,
    attempt_start: u64,
}

impl FileSink {
    pub fn create(path: &std::path::Path, header: &Header) -> io::Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        header.write_to(&mut out)?;
        out.flush()?;
        let attempt_start = out.get_mut().stream_position()?;
        Ok(FileSink { out, attempt_start })
    }
}

impl Sink for FileSink {
    fn emit(&mut self, t: Transition) -> io::Result<()> {
        write_edge(&mut self.out, &t)
    }

    fn restart(&mut self) -> io::Result<()> {
        self.out.flush()?;
        let file = self.out.get_mut();
        file.set_len(self.attempt_start)?;
        file.seek(SeekFrom::Start(self.attempt_start))?;
        Ok(())
    }

    fn commit(&mut self) -> io::Result<()> {
        self.out.flush()?;
        self.out.get_ref().sync_data().or_else(|e| {
            // Character devices and pipes cannot be synced.
            if e.kind() == io::ErrorKind::InvalidInput { Ok(()) } else { Err(e) }
        })
    }
}

/// Non-seekable sink: rejected attempts stay in the stream, followed by a
/// `# restart` marker; the accepted attempt ends with `# commit`.
#[derive(Debug)]
pub struct FramedSink<W: Write> {
    out: W,
}

impl<W: Write> FramedSink<W> {
    /// Writes the header immediately.
    pub fn new(mut out: W, header: &Header) -> io::Result<Self> {
        header.write_to(&mut out)?;
        Ok(FramedSink { out })
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> Sink for FramedSink<W> {
    fn emit(&mut self, t: Transition) -> io::Result<()> {
        write_edge(&mut self.out, &t)
    }

    fn restart(&mut self) -> io::Result<()> {
        writeln!(self.out, "{RESTART_LINE}")
    }

    fn commit(&mut self) -> io::Result<()> {
        writeln!(self.out, "{COMMIT_LINE}")?;
        self.out.flush()
    }
}

/// Plain writer sink for outputs where no restart can happen.
#[derive(Debug)]
pub struct PlainSink<W: Write> {
    out: W,
}

impl<W: Write> PlainSink<W> {
    pub fn new(mut out: W, header: &Header) -> io::Result<Self> {
        header.write_to(&mut out)?;
        Ok(PlainSink { out })
    }
}

impl<W: Write> Sink for PlainSink<W> {
    fn emit(&mut self, t: Transition) -> io::Result<()> {
        write_edge(&mut self.out, &t)
    }

    fn restart(&mut self) -> io::Result<()> {
        Err(io::Error::new(io::ErrorKind::Unsupported, "cannot restart a plain non-seekable stream"))
    }

    fn commit(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: u64, message: String },
    #[error("truncated: header declares m={declared} but only {found} edge lines follow")]
    Truncated { declared: u64, found: u64 },
    #[error("empty file")]
    Empty,
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Parsed edge-list file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub header: Header,
    /// Edges of the last attempt, in file order.
    pub transitions: Vec<Transition>,
    /// Whether a `# commit` marker was present.
    pub committed: bool,
}

fn parse_field(field: Option<&str>, line: u64, what: &str) -> Result<u64, ParseError> {
    let field = field.ok_or_else(|| ParseError::Syntax { line, message: format!("missing {what}") })?;
    field
        .parse()
        .map_err(|_| ParseError::Syntax { line, message: format!("{what} `{field}` is not a non-negative integer") })
}

/// Reads an edge-list file. Fails on syntax errors (with the line number)
/// and on files with fewer edges than the header declares.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<EdgeList, ParseError> {
    let mut lines = reader.lines();
    let first = lines.next().ok_or(ParseError::Empty)??;
    let header = Header::parse(&first).map_err(|message| ParseError::Syntax { line: 1, message })?;
    let mut transitions = Vec::new();
    let mut committed = false;
    for (idx, line) in lines.enumerate() {
        let line_no = idx as u64 + 2;
        let line = line?;
        if committed {
            return Err(ParseError::Syntax { line: line_no, message: "content after `# commit`".into() });
        }
        match line.as_str() {
            RESTART_LINE => transitions.clear(),
            COMMIT_LINE => committed = true,
            _ => {
                let mut fields = line.split('\t');
                let source = parse_field(fields.next(), line_no, "source")?;
                let label = parse_field(fields.next(), line_no, "label")?;
                let dest = parse_field(fields.next(), line_no, "dest")?;
                if fields.next().is_some() {
                    return Err(ParseError::Syntax { line: line_no, message: "more than three fields".into() });
                }
                transitions.push(Transition::new(source, label, dest));
            }
        }
    }
    let found = transitions.len() as u64;
    if found < header.m {
        return Err(ParseError::Truncated { declared: header.m, found });
    }
    Ok(EdgeList { header, transitions, committed })
}
