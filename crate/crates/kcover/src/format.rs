//! Line-oriented text formats for instances, deployments and partitions.
//!
//! All three share the same shape: a magic line with a version, a line of
//! dimensions, then one record per line. Blank lines and lines starting with
//! `#` are skipped. Identifiers in files are 1-based.
//!
//! ```text
//! kcover 1
//! # |S| n k
//! 4 3 2
//! 1 2 1 3
//! 2 0
//! 3 3 2 3 4
//! ```

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use kcover_core::netsim::{Deployment, Point, SensorSpec};
use kcover_core::{Partition, ProblemInstance};

use crate::error::{Error, Result};

pub const INSTANCE_MAGIC: &str = "kcover";
pub const DEPLOYMENT_MAGIC: &str = "kdeploy";
pub const PARTITION_MAGIC: &str = "kpartition";
pub const VERSION: u32 = 1;

struct Lines<'a> {
    source: &'a str,
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str, source: &'a str) -> Self {
        Lines {
            source,
            inner: text.lines().enumerate(),
            last: 0,
        }
    }

    /// Next non-comment line as (line number, tokens).
    fn next_record(&mut self) -> Option<(usize, Vec<&'a str>)> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            return Some((i + 1, line.split_whitespace().collect()));
        }
        None
    }

    fn expect_record(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        let eof = self.last + 1;
        self.next_record()
            .ok_or_else(|| self.error(eof, format!("unexpected end of file, expected {what}")))
    }

    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.source.to_string(),
            line,
            message: message.into(),
        }
    }

    fn header(&mut self, magic: &str) -> Result<()> {
        let (line, tokens) = self.expect_record("header")?;
        match tokens.as_slice() {
            [m, v] if *m == magic => {
                if v.parse::<u32>().ok() == Some(VERSION) {
                    Ok(())
                } else {
                    Err(self.error(line, format!("unsupported {magic} version `{v}`")))
                }
            }
            _ => Err(self.error(
                line,
                format!("malformed header, expected `{magic} {VERSION}`"),
            )),
        }
    }

    fn number<T: FromStr>(&self, line: usize, token: &str, what: &str) -> Result<T> {
        token
            .parse()
            .map_err(|_| self.error(line, format!("invalid {what} `{token}`")))
    }

    fn coordinate(&self, line: usize, token: &str, what: &str) -> Result<f64> {
        let x: f64 = self.number(line, token, what)?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(self.error(line, format!("{what} must be finite")))
        }
    }

    /// Parses a 1-based id in `1..=max` and returns it 0-based.
    fn id(&self, line: usize, token: &str, what: &str, max: usize) -> Result<usize> {
        let id: usize = self.number(line, token, what)?;
        if id == 0 || id > max {
            return Err(self.error(line, format!("{what} {id} out of range 1..={max}")));
        }
        Ok(id - 1)
    }

    fn dimensions(&mut self, names: [&str; 3]) -> Result<(usize, [usize; 3])> {
        let (line, tokens) = self.expect_record("dimension line")?;
        if tokens.len() != 3 {
            return Err(self.error(
                line,
                format!("expected `<{}> <{}> <{}>`", names[0], names[1], names[2]),
            ));
        }
        let mut dims = [0; 3];
        for (d, (t, name)) in dims.iter_mut().zip(tokens.iter().zip(names)) {
            *d = self.number(line, t, name)?;
        }
        if dims[2] < 2 {
            return Err(self.error(line, format!("k must be at least 2, got {}", dims[2])));
        }
        Ok((line, dims))
    }

    fn end(&mut self) -> Result<()> {
        match self.next_record() {
            None => Ok(()),
            Some((line, _)) => Err(self.error(line, "unexpected trailing record")),
        }
    }
}

fn missing<T>(lines: &Lines, slots: &[Option<T>], what: &str) -> Result<()> {
    match slots.iter().position(Option::is_none) {
        None => Ok(()),
        Some(j) => Err(lines.error(lines.last + 1, format!("missing {what} {}", j + 1))),
    }
}

pub fn parse_instance(text: &str, source: &str) -> Result<ProblemInstance> {
    let mut lines = Lines::new(text, source);
    lines.header(INSTANCE_MAGIC)?;
    let (dim_line, [num_areas, num_subsets, k]) = lines.dimensions(["|S|", "n", "k"])?;
    if num_areas == 0 || num_subsets == 0 {
        return Err(lines.error(dim_line, "need at least one area and one subset"));
    }

    let mut subsets: Vec<Option<Vec<u32>>> = vec![None; num_subsets];
    for _ in 0..num_subsets {
        let (line, tokens) = lines.expect_record("subset line")?;
        if tokens.len() < 2 {
            return Err(lines.error(line, "expected `<subset-id> <count> <area-id>...`"));
        }
        let j = lines.id(line, tokens[0], "subset id", num_subsets)?;
        if subsets[j].is_some() {
            return Err(lines.error(line, format!("subset {} listed twice", j + 1)));
        }
        let count: usize = lines.number(line, tokens[1], "count")?;
        if tokens.len() - 2 != count {
            return Err(lines.error(
                line,
                format!("count says {count} areas but {} follow", tokens.len() - 2),
            ));
        }
        let mut areas: Vec<u32> = Vec::with_capacity(count);
        for t in &tokens[2..] {
            let v = lines.id(line, t, "area id", num_areas)? as u32;
            match areas.last() {
                Some(&prev) if prev == v => {
                    return Err(lines.error(line, format!("duplicate edge to area {}", v + 1)))
                }
                Some(&prev) if prev > v => {
                    return Err(lines.error(line, "area ids must be ascending"))
                }
                _ => areas.push(v),
            }
        }
        subsets[j] = Some(areas);
    }
    missing(&lines, &subsets, "subset")?;
    lines.end()?;
    Ok(ProblemInstance::new(
        num_areas,
        k,
        subsets.into_iter().flatten().collect(),
    )?)
}

pub fn format_instance(instance: &ProblemInstance) -> String {
    let mut out = format!("{INSTANCE_MAGIC} {VERSION}\n");
    let _ = writeln!(
        out,
        "{} {} {}",
        instance.num_areas(),
        instance.num_subsets(),
        instance.k()
    );
    for (j, areas) in instance.subsets().enumerate() {
        let _ = write!(out, "{} {}", j + 1, areas.len());
        for v in areas {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}

/// A deployment together with the cover count stored in its file.
pub fn parse_deployment(text: &str, source: &str) -> Result<(Deployment, usize)> {
    let mut lines = Lines::new(text, source);
    lines.header(DEPLOYMENT_MAGIC)?;
    let (dim_line, [num_sensors, num_areas, k]) =
        lines.dimensions(["num_sensors", "num_areas", "k"])?;
    if num_areas == 0 || num_sensors == 0 {
        return Err(lines.error(dim_line, "need at least one sensor and one area"));
    }

    let mut sensors = vec![None; num_sensors];
    for _ in 0..num_sensors {
        let (line, tokens) = lines.expect_record("sensor line")?;
        let [id, x, y, r] = tokens[..] else {
            return Err(lines.error(line, "expected `<id> <x> <y> <sensing_radius>`"));
        };
        let j = lines.id(line, id, "sensor id", num_sensors)?;
        if sensors[j].is_some() {
            return Err(lines.error(line, format!("sensor {} listed twice", j + 1)));
        }
        let radius = lines.coordinate(line, r, "sensing radius")?;
        if radius < 0.0 {
            return Err(lines.error(line, "sensing radius must be non-negative"));
        }
        sensors[j] = Some(SensorSpec {
            position: Point::new(
                lines.coordinate(line, x, "x")?,
                lines.coordinate(line, y, "y")?,
            ),
            sensing_radius: radius,
        });
    }
    missing(&lines, &sensors, "sensor")?;

    let mut areas = vec![None; num_areas];
    for _ in 0..num_areas {
        let (line, tokens) = lines.expect_record("area line")?;
        let [id, x, y] = tokens[..] else {
            return Err(lines.error(line, "expected `<id> <x> <y>`"));
        };
        let v = lines.id(line, id, "area id", num_areas)?;
        if areas[v].is_some() {
            return Err(lines.error(line, format!("area {} listed twice", v + 1)));
        }
        areas[v] = Some(Point::new(
            lines.coordinate(line, x, "x")?,
            lines.coordinate(line, y, "y")?,
        ));
    }
    missing(&lines, &areas, "area")?;
    lines.end()?;

    let deployment = Deployment::new(
        sensors.into_iter().flatten().collect(),
        areas.into_iter().flatten().collect(),
    )?;
    Ok((deployment, k))
}

/// Coordinates use the shortest representation that parses back to the
/// same `f64`.
pub fn format_deployment(deployment: &Deployment, k: usize) -> String {
    let mut out = format!("{DEPLOYMENT_MAGIC} {VERSION}\n");
    let _ = writeln!(
        out,
        "{} {} {}",
        deployment.sensors().len(),
        deployment.areas().len(),
        k
    );
    for (j, s) in deployment.sensors().iter().enumerate() {
        let _ = writeln!(
            out,
            "{} {} {} {}",
            j + 1,
            s.position.x,
            s.position.y,
            s.sensing_radius
        );
    }
    for (v, p) in deployment.areas().iter().enumerate() {
        let _ = writeln!(out, "{} {} {}", v + 1, p.x, p.y);
    }
    out
}

pub fn parse_partition(text: &str, source: &str) -> Result<Partition> {
    let mut lines = Lines::new(text, source);
    lines.header(PARTITION_MAGIC)?;
    let (line, tokens) = lines.expect_record("dimension line")?;
    let [n, k] = tokens[..] else {
        return Err(lines.error(line, "expected `<n> <k>`"));
    };
    let n: usize = lines.number(line, n, "n")?;
    let k: usize = lines.number(line, k, "k")?;
    if k < 2 {
        return Err(lines.error(line, format!("k must be at least 2, got {k}")));
    }

    let mut covers = vec![None; n];
    for _ in 0..n {
        let (line, tokens) = lines.expect_record("assignment line")?;
        let [id, cover] = tokens[..] else {
            return Err(lines.error(line, "expected `<subset-id> <cover-id>`"));
        };
        let j = lines.id(line, id, "subset id", n)?;
        if covers[j].is_some() {
            return Err(lines.error(line, format!("subset {} listed twice", j + 1)));
        }
        covers[j] = Some(lines.id(line, cover, "cover id", k)? as u32);
    }
    missing(&lines, &covers, "subset")?;
    lines.end()?;
    Ok(Partition::new(k, covers.into_iter().flatten().collect())?)
}

pub fn format_partition(partition: &Partition) -> String {
    let mut out = format!(
        "{PARTITION_MAGIC} {VERSION}\n{} {}\n",
        partition.len(),
        partition.k()
    );
    for (j, c) in partition.assignment().iter().enumerate() {
        let _ = writeln!(out, "{} {}", j + 1, c + 1);
    }
    out
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: &Path) -> Result<ProblemInstance> {
    parse_instance(&read_text(path)?, &path.display().to_string())
}

pub fn read_deployment(path: &Path) -> Result<(Deployment, usize)> {
    parse_deployment(&read_text(path)?, &path.display().to_string())
}

pub fn read_partition(path: &Path) -> Result<Partition> {
    parse_partition(&read_text(path)?, &path.display().to_string())
}
