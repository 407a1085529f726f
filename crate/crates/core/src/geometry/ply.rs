//! Point-cloud file formats: ASCII PLY (write + read), little-endian binary
//! PLY (read), and whitespace-separated XYZ text.
//!
//! Vertices must carry `x,y,z`; `nx,ny,nz` are picked up when present and
//! every other property is skipped. Writing uses shortest-round-trip float
//! formatting so an ASCII round trip reproduces the input bit-exactly.

use std::io::{BufRead, Write};

use byteorder::{LittleEndian, ReadBytesExt};
use thiserror::Error;

use super::{Point3, PointCloud, Vector3};

#[derive(Debug, Error)]
pub enum PlyError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported PLY feature: {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ScalarType {
    I8,
    U8,
    I16,
    U16,
    I32,
    U32,
    F32,
    F64,
}

impl ScalarType {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "char" | "int8" => Self::I8,
            "uchar" | "uint8" => Self::U8,
            "short" | "int16" => Self::I16,
            "ushort" | "uint16" => Self::U16,
            "int" | "int32" => Self::I32,
            "uint" | "uint32" => Self::U32,
            "float" | "float32" => Self::F32,
            "double" | "float64" => Self::F64,
            _ => return None,
        })
    }

    fn size(self) -> usize {
        match self {
            Self::I8 | Self::U8 => 1,
            Self::I16 | Self::U16 => 2,
            Self::I32 | Self::U32 => 4,
            Self::F32 => 4,
            Self::F64 => 8,
        }
    }

    fn read_f64<R: std::io::Read>(self, r: &mut R) -> std::io::Result<f64> {
        Ok(match self {
            Self::I8 => r.read_i8()? as f64,
            Self::U8 => r.read_u8()? as f64,
            Self::I16 => r.read_i16::<LittleEndian>()? as f64,
            Self::U16 => r.read_u16::<LittleEndian>()? as f64,
            Self::I32 => r.read_i32::<LittleEndian>()? as f64,
            Self::U32 => r.read_u32::<LittleEndian>()? as f64,
            Self::F32 => r.read_f32::<LittleEndian>()? as f64,
            Self::F64 => r.read_f64::<LittleEndian>()?,
        })
    }
}

#[derive(Debug, Clone)]
enum Property {
    Scalar { name: String, ty: ScalarType },
    List { count_ty: ScalarType, item_ty: ScalarType },
}

#[derive(Debug, Clone)]
struct Element {
    name: String,
    count: usize,
    properties: Vec<Property>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Ascii,
    BinaryLittleEndian,
}

/// Reads a PLY point cloud (positions plus optional normals).
pub fn read_ply<R: BufRead>(mut reader: R) -> Result<PointCloud, PlyError> {
    let mut line = String::new();
    let mut line_no = 0usize;
    let mut read_line = |reader: &mut R, line: &mut String| -> Result<usize, PlyError> {
        line.clear();
        let n = reader.read_line(line)?;
        line_no += 1;
        Ok(if n == 0 { 0 } else { line_no })
    };

    let n = read_line(&mut reader, &mut line)?;
    if n == 0 || line.trim() != "ply" {
        return Err(PlyError::Parse { line: 1, message: "missing 'ply' magic".into() });
    }

    let mut format = None;
    let mut elements: Vec<Element> = Vec::new();
    loop {
        let n = read_line(&mut reader, &mut line)?;
        if n == 0 {
            return Err(PlyError::Parse { line: n, message: "unexpected EOF in header".into() });
        }
        let trimmed = line.trim();
        let mut tokens = trimmed.split_whitespace();
        match tokens.next() {
            Some("comment") | Some("obj_info") | Some("") | None => continue,
            Some("format") => {
                format = match tokens.next() {
                    Some("ascii") => Some(Format::Ascii),
                    Some("binary_little_endian") => Some(Format::BinaryLittleEndian),
                    Some(other) => {
                        return Err(PlyError::Unsupported(format!("format {other}")));
                    }
                    None => {
                        return Err(PlyError::Parse { line: n, message: "bad format line".into() })
                    }
                };
            }
            Some("element") => {
                let name = tokens
                    .next()
                    .ok_or_else(|| PlyError::Parse { line: n, message: "element name".into() })?;
                let count: usize = tokens
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| PlyError::Parse { line: n, message: "element count".into() })?;
                elements.push(Element { name: name.to_string(), count, properties: Vec::new() });
            }
            Some("property") => {
                let el = elements.last_mut().ok_or_else(|| PlyError::Parse {
                    line: n,
                    message: "property before element".into(),
                })?;
                let ty_tok = tokens
                    .next()
                    .ok_or_else(|| PlyError::Parse { line: n, message: "property type".into() })?;
                if ty_tok == "list" {
                    let count_ty = tokens.next().and_then(ScalarType::parse).ok_or_else(|| {
                        PlyError::Parse { line: n, message: "list count type".into() }
                    })?;
                    let item_ty = tokens.next().and_then(ScalarType::parse).ok_or_else(|| {
                        PlyError::Parse { line: n, message: "list item type".into() }
                    })?;
                    el.properties.push(Property::List { count_ty, item_ty });
                } else {
                    let ty = ScalarType::parse(ty_tok).ok_or_else(|| {
                        PlyError::Unsupported(format!("property type {ty_tok}"))
                    })?;
                    let name = tokens.next().ok_or_else(|| PlyError::Parse {
                        line: n,
                        message: "property name".into(),
                    })?;
                    el.properties.push(Property::Scalar { name: name.to_string(), ty });
                }
            }
            Some("end_header") => break,
            Some(other) => {
                return Err(PlyError::Parse {
                    line: n,
                    message: format!("unknown header keyword '{other}'"),
                });
            }
        }
    }
    let format = format
        .ok_or_else(|| PlyError::Parse { line: 0, message: "missing format line".into() })?;

    let mut points = Vec::new();
    let mut normals: Vec<Vector3> = Vec::new();
    let mut have_normals = false;

    for element in &elements {
        if element.name == "vertex" {
            let field = |want: &str| -> Option<usize> {
                element.properties.iter().position(|p| match p {
                    Property::Scalar { name, .. } => name == want,
                    Property::List { .. } => false,
                })
            };
            let (xi, yi, zi) = match (field("x"), field("y"), field("z")) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => return Err(PlyError::Unsupported("vertex without x,y,z".into())),
            };
            let normal_idx = match (field("nx"), field("ny"), field("nz")) {
                (Some(a), Some(b), Some(c)) => Some((a, b, c)),
                _ => None,
            };
            have_normals = normal_idx.is_some();
            points.reserve(element.count);
            for row in 0..element.count {
                let values = read_row(&mut reader, element, format, row)?;
                points.push(Point3::new(values[xi], values[yi], values[zi]));
                if let Some((a, b, c)) = normal_idx {
                    normals.push(Vector3::new(values[a], values[b], values[c]));
                }
            }
        } else {
            for row in 0..element.count {
                read_row(&mut reader, element, format, row)?;
            }
        }
    }

    if have_normals {
        PointCloud::with_normals(points, normals)
            .map_err(|e| PlyError::Parse { line: 0, message: e.to_string() })
    } else {
        Ok(PointCloud::new(points))
    }
}

/// Reads one element row, returning scalar property values in declaration
/// order (list properties contribute a placeholder 0 and are skipped).
fn read_row<R: BufRead>(
    reader: &mut R,
    element: &Element,
    format: Format,
    row: usize,
) -> Result<Vec<f64>, PlyError> {
    let mut out = Vec::with_capacity(element.properties.len());
    match format {
        Format::Ascii => {
            let mut line = String::new();
            loop {
                line.clear();
                if reader.read_line(&mut line)? == 0 {
                    return Err(PlyError::Parse {
                        line: 0,
                        message: format!("EOF in element '{}' row {row}", element.name),
                    });
                }
                if !line.trim().is_empty() {
                    break;
                }
            }
            let mut tokens = line.split_whitespace();
            for prop in &element.properties {
                match prop {
                    Property::Scalar { .. } => {
                        let tok = tokens.next().ok_or_else(|| PlyError::Parse {
                            line: 0,
                            message: format!("short row in element '{}'", element.name),
                        })?;
                        let v: f64 = tok.parse().map_err(|_| PlyError::Parse {
                            line: 0,
                            message: format!("bad number '{tok}'"),
                        })?;
                        out.push(v);
                    }
                    Property::List { .. } => {
                        let count_tok = tokens.next().ok_or_else(|| PlyError::Parse {
                            line: 0,
                            message: "missing list count".into(),
                        })?;
                        let count: usize = count_tok.parse().map_err(|_| PlyError::Parse {
                            line: 0,
                            message: format!("bad list count '{count_tok}'"),
                        })?;
                        for _ in 0..count {
                            tokens.next().ok_or_else(|| PlyError::Parse {
                                line: 0,
                                message: "short list row".into(),
                            })?;
                        }
                        out.push(0.0);
                    }
                }
            }
        }
        Format::BinaryLittleEndian => {
            for prop in &element.properties {
                match prop {
                    Property::Scalar { ty, .. } => out.push(ty.read_f64(reader)?),
                    Property::List { count_ty, item_ty } => {
                        let count = count_ty.read_f64(reader)? as usize;
                        let mut skip = vec![0u8; count * item_ty.size()];
                        reader.read_exact(&mut skip)?;
                        out.push(0.0);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Writes an ASCII PLY with positions and, when present, normals.
pub fn write_ply_ascii<W: Write>(mut w: W, cloud: &PointCloud) -> std::io::Result<()> {
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", cloud.len())?;
    writeln!(w, "property double x")?;
    writeln!(w, "property double y")?;
    writeln!(w, "property double z")?;
    if cloud.normals().is_some() {
        writeln!(w, "property double nx")?;
        writeln!(w, "property double ny")?;
        writeln!(w, "property double nz")?;
    }
    writeln!(w, "end_header")?;
    match cloud.normals() {
        Some(normals) => {
            for (p, n) in cloud.points().iter().zip(normals) {
                writeln!(w, "{} {} {} {} {} {}", p.x, p.y, p.z, n.x, n.y, n.z)?;
            }
        }
        None => {
            for p in cloud.points() {
                writeln!(w, "{} {} {}", p.x, p.y, p.z)?;
            }
        }
    }
    Ok(())
}

/// Writes an ASCII PLY with an RGB color per vertex.
pub fn write_ply_ascii_colored<W: Write>(
    mut w: W,
    points: &[Point3],
    colors: &[[u8; 3]],
) -> std::io::Result<()> {
    assert_eq!(points.len(), colors.len());
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "element vertex {}", points.len())?;
    writeln!(w, "property double x")?;
    writeln!(w, "property double y")?;
    writeln!(w, "property double z")?;
    writeln!(w, "property uchar red")?;
    writeln!(w, "property uchar green")?;
    writeln!(w, "property uchar blue")?;
    writeln!(w, "end_header")?;
    for (p, c) in points.iter().zip(colors) {
        writeln!(w, "{} {} {} {} {} {}", p.x, p.y, p.z, c[0], c[1], c[2])?;
    }
    Ok(())
}

/// Reads whitespace-separated XYZ text: three or six columns per line
/// (positions, optionally followed by normals). Blank lines and `#` comments
/// are ignored.
pub fn read_xyz<R: BufRead>(reader: R) -> Result<PointCloud, PlyError> {
    let mut points = Vec::new();
    let mut normals = Vec::new();
    let mut columns: Option<usize> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let values: Result<Vec<f64>, _> = trimmed.split_whitespace().map(str::parse).collect();
        let values = values.map_err(|_| PlyError::Parse {
            line: i + 1,
            message: "bad number".into(),
        })?;
        let n = *columns.get_or_insert(values.len());
        if values.len() != n || (n != 3 && n != 6) {
            return Err(PlyError::Parse {
                line: i + 1,
                message: format!("expected 3 or 6 columns, got {}", values.len()),
            });
        }
        points.push(Point3::new(values[0], values[1], values[2]));
        if n == 6 {
            normals.push(Vector3::new(values[3], values[4], values[5]));
        }
    }
    if normals.is_empty() {
        Ok(PointCloud::new(points))
    } else {
        PointCloud::with_normals(points, normals)
            .map_err(|e| PlyError::Parse { line: 0, message: e.to_string() })
    }
}

/// Writes whitespace-separated XYZ text (six columns when normals exist).
pub fn write_xyz<W: Write>(mut w: W, cloud: &PointCloud) -> std::io::Result<()> {
    match cloud.normals() {
        Some(normals) => {
            for (p, n) in cloud.points().iter().zip(normals) {
                writeln!(w, "{} {} {} {} {} {}", p.x, p.y, p.z, n.x, n.y, n.z)?;
            }
        }
        None => {
            for p in cloud.points() {
                writeln!(w, "{} {} {}", p.x, p.y, p.z)?;
            }
        }
    }
    Ok(())
}
