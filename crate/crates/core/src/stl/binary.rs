use super::{sanitize_solid_name, Facet, StlError, StlFormat, StlModel, Vec3};

pub const BINARY_HEADER_SIZE: usize = 80;
pub const BINARY_FACET_SIZE: usize = 50;

/// Total file length implied by the count field, if the header is present.
pub(super) fn declared_len(bytes: &[u8]) -> Option<u64> {
    let count = read_count(bytes)?;
    Some(BINARY_HEADER_SIZE as u64 + 4 + BINARY_FACET_SIZE as u64 * count as u64)
}

fn read_count(bytes: &[u8]) -> Option<u32> {
    let raw = bytes.get(BINARY_HEADER_SIZE..BINARY_HEADER_SIZE + 4)?;
    Some(u32::from_le_bytes(raw.try_into().unwrap()))
}

fn read_vec3(rec: &[u8]) -> Vec3 {
    let f = |i: usize| f32::from_le_bytes(rec[i * 4..i * 4 + 4].try_into().unwrap());
    Vec3::new(f(0), f(1), f(2))
}

/// Parse a binary STL: 80-byte header, LE `u32` count, 50-byte records.
pub fn parse_binary(bytes: &[u8]) -> Result<StlModel, StlError> {
    let count = read_count(bytes).ok_or(StlError::TooShort(bytes.len()))?;
    let expected = declared_len(bytes).unwrap();
    if usize::try_from(expected).is_err() {
        return Err(StlError::CountOverflow(count));
    }
    if expected != bytes.len() as u64 {
        return Err(StlError::LengthMismatch {
            count,
            expected,
            actual: bytes.len(),
        });
    }

    let header = &bytes[..BINARY_HEADER_SIZE];
    let name_end = header.iter().position(|&b| b == 0).unwrap_or(BINARY_HEADER_SIZE);
    let solid_name = String::from_utf8_lossy(&header[..name_end]).trim().to_string();

    let facets = bytes[BINARY_HEADER_SIZE + 4..]
        .chunks_exact(BINARY_FACET_SIZE)
        .enumerate()
        .map(|(i, rec)| {
            let normal = read_vec3(&rec[0..12]);
            let vertices = [read_vec3(&rec[12..24]), read_vec3(&rec[24..36]), read_vec3(&rec[36..48])];
            if !normal.is_finite() || !vertices.iter().all(|v| v.is_finite()) {
                return Err(StlError::NonFinite { facet: i });
            }
            Ok(Facet {
                vertices,
                normal,
                attribute: u16::from_le_bytes([rec[48], rec[49]]),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(StlModel::new(solid_name, facets, StlFormat::Binary))
}

/// Serialize to binary STL. The header holds the sanitized solid name,
/// zero padded; attribute words are written as stored in the model.
pub fn write_binary(model: &StlModel) -> Vec<u8> {
    let count = u32::try_from(model.facets.len()).expect("binary STL holds fewer than 2^32 facets");
    let mut out = Vec::with_capacity(BINARY_HEADER_SIZE + 4 + BINARY_FACET_SIZE * model.facets.len());

    let mut header = [0u8; BINARY_HEADER_SIZE];
    let name = sanitize_solid_name(&model.solid_name);
    header[..name.len()].copy_from_slice(name.as_bytes());
    out.extend_from_slice(&header);
    out.extend_from_slice(&count.to_le_bytes());

    for f in &model.facets {
        for v in [f.normal, f.vertices[0], f.vertices[1], f.vertices[2]] {
            for c in v.to_array() {
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
        out.extend_from_slice(&f.attribute.to_le_bytes());
    }
    out
}
