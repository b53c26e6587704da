//! Isomorphism signatures of 3-manifold triangulations with a taut angle
//! suffix, as used by the public veering census (`<isosig>_<angles>`).
//!
//! The signature is a base-64 string: the tetrahedron count, face actions
//! packed three per character (1 opens a new tetrahedron with the identity
//! gluing, 2 joins to a seen tetrahedron), then the join destinations and
//! the join permutations as indices into the lexicographic list of `S_4`.
//! The canonical signature is the bytewise least over all starting
//! tetrahedra and starting vertex labelings.

use super::triangulation::{
    compose, edge_number, edge_pair, inverse, Gluing, Perm4, TautVeeringTriangulation,
    TriangulationError, EDGE_VERTICES, IDENTITY,
};

const ALPHABET: &[u8; 64] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-";

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("malformed signature: {0}")]
    MalformedSignature(String),
    #[error("unsupported signature: {0}")]
    UnsupportedVersion(String),
    #[error("signature decodes to an invalid taut veering triangulation: {0}")]
    Invalid(#[from] TriangulationError),
}

fn malformed(m: impl Into<String>) -> SignatureError {
    SignatureError::MalformedSignature(m.into())
}

fn char_value(c: u8) -> Result<usize, SignatureError> {
    ALPHABET.iter().position(|&a| a == c).ok_or_else(|| {
        malformed(format!(
            "character {:?} is outside the signature alphabet",
            c as char
        ))
    })
}

/// All 24 permutations in lexicographic order of their image arrays.
pub fn s4_ordered() -> Vec<Perm4> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    let mut s = p;
                    s.sort_unstable();
                    if s == IDENTITY {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn perm_index(p: Perm4) -> usize {
    s4_ordered()
        .iter()
        .position(|&q| q == p)
        .expect("valid permutation")
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn value(&mut self, width: usize) -> Result<usize, SignatureError> {
        let mut v = 0usize;
        for i in 0..width {
            let c = *self
                .bytes
                .get(self.pos)
                .ok_or_else(|| malformed("signature ends early"))?;
            self.pos += 1;
            v |= char_value(c)? << (6 * i);
        }
        Ok(v)
    }
}

fn push_value(out: &mut String, mut v: usize, width: usize) {
    for _ in 0..width {
        out.push(ALPHABET[v & 63] as char);
        v >>= 6;
    }
}

/// Decode the triangulation part of a signature into face gluings.
pub fn decode_isosig(sig: &str) -> Result<Vec<[Gluing; 4]>, SignatureError> {
    let mut r = Reader {
        bytes: sig.as_bytes(),
        pos: 0,
    };
    if sig.is_empty() {
        return Err(malformed("empty signature"));
    }
    let mut n = r.value(1)?;
    let mut width = 1;
    if n == 63 {
        width = r.value(1)?;
        if width == 0 {
            return Err(malformed("zero-width size field"));
        }
        n = r.value(width)?;
    }
    if n == 0 {
        return Err(malformed("signature has no tetrahedra"));
    }
    let total = 4 * n;
    let mut actions = Vec::new();
    let (mut covered, mut news, mut joins) = (0usize, 0usize, 0usize);
    while covered < total {
        let c = r.value(1)?;
        for k in 0..3 {
            if covered >= total {
                if (c >> (2 * k)) & 3 != 0 {
                    return Err(malformed("nonzero padding in face actions"));
                }
                continue;
            }
            let a = (c >> (2 * k)) & 3;
            match a {
                0 => return Err(malformed("triangulation has boundary faces")),
                1 => news += 1,
                2 => joins += 1,
                _ => return Err(malformed("face action 3 is undefined")),
            }
            covered += 2;
            actions.push(a);
        }
    }
    if covered != total || news + 1 != n {
        return Err(malformed("face actions do not match the tetrahedron count"));
    }
    let dests = (0..joins)
        .map(|_| r.value(width))
        .collect::<Result<Vec<_>, _>>()?;
    let s4 = s4_ordered();
    let perms = (0..joins)
        .map(|_| {
            let i = r.value(1)?;
            s4.get(i)
                .copied()
                .ok_or_else(|| malformed(format!("permutation index {i} is out of range")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if r.pos != sig.len() {
        return Err(SignatureError::UnsupportedVersion(
            "trailing data after the first component (multi-component signatures are not supported)".into(),
        ));
    }

    let mut glue: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; n];
    let (mut ai, mut ji, mut next) = (0usize, 0usize, 1usize);
    for t in 0..n {
        for f in 0..4 {
            if glue[t][f].is_some() {
                continue;
            }
            let a = *actions
                .get(ai)
                .ok_or_else(|| malformed("too few face actions"))?;
            ai += 1;
            let (dest, perm) = if a == 1 {
                if next >= n {
                    return Err(malformed("too many new tetrahedra"));
                }
                next += 1;
                (next - 1, IDENTITY)
            } else {
                let (d, p) = (dests[ji], perms[ji]);
                ji += 1;
                if d < t || (d == t && (p[f] as usize) < f) || d >= next {
                    return Err(malformed("join to an unexpected face"));
                }
                (d, p)
            };
            let back = perm[f] as usize;
            if glue[dest][back].is_some() || (dest == t && back == f) {
                return Err(malformed("face glued twice"));
            }
            glue[t][f] = Some(Gluing { tet: dest, perm });
            glue[dest][back] = Some(Gluing {
                tet: t,
                perm: inverse(perm),
            });
        }
    }
    glue.into_iter()
        .map(|g| {
            let known: Option<Vec<Gluing>> = g.iter().copied().collect();
            known
                .map(|v| [v[0], v[1], v[2], v[3]])
                .ok_or_else(|| malformed("unglued face"))
        })
        .collect()
}

/// One relabeling: old tetrahedron to new index and the vertex map into the new labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabeling {
    pub image: Vec<usize>,
    pub vmap: Vec<Perm4>,
}

/// Signature of the labeling that starts at `start` with vertices renamed by `vperm^{-1}`.
pub fn signature_from(g: &[[Gluing; 4]], start: usize, vperm: Perm4) -> (String, Relabeling) {
    let n = g.len();
    let mut image = vec![usize::MAX; n];
    let mut pre = vec![usize::MAX; n];
    let mut vmap = vec![IDENTITY; n];
    image[start] = 0;
    pre[0] = start;
    vmap[start] = inverse(vperm);
    let mut next = 1;
    let (mut actions, mut dests, mut perms) = (Vec::new(), Vec::new(), Vec::new());
    for simg in 0..n {
        let src = pre[simg];
        for fimg in 0..4u8 {
            let fsrc = inverse(vmap[src])[fimg as usize] as usize;
            let Gluing {
                tet: dest,
                perm: gl,
            } = g[src][fsrc];
            if image[dest] != usize::MAX {
                if image[dest] < simg
                    || (image[dest] == simg && compose(vmap[src], gl)[fsrc] < fimg)
                {
                    continue;
                }
                actions.push(2usize);
                dests.push(image[dest]);
                perms.push(compose(compose(vmap[dest], gl), inverse(vmap[src])));
            } else {
                image[dest] = next;
                pre[next] = dest;
                next += 1;
                vmap[dest] = compose(vmap[src], inverse(gl));
                actions.push(1);
            }
        }
    }
    let width = if n < 63 {
        1
    } else {
        let mut w = 1;
        while n >> (6 * w) > 0 {
            w += 1;
        }
        w
    };
    let mut out = String::new();
    if n < 63 {
        push_value(&mut out, n, 1);
    } else {
        out.push(ALPHABET[63] as char);
        push_value(&mut out, width, 1);
        push_value(&mut out, n, width);
    }
    for chunk in actions.chunks(3) {
        let v = chunk
            .iter()
            .enumerate()
            .fold(0, |acc, (k, &a)| acc | (a << (2 * k)));
        push_value(&mut out, v, 1);
    }
    for &d in &dests {
        push_value(&mut out, d, width);
    }
    for &p in &perms {
        push_value(&mut out, perm_index(p), 1);
    }
    (out, Relabeling { image, vmap })
}

/// The canonical signature together with every relabeling achieving it.
pub fn canonical_signature(g: &[[Gluing; 4]]) -> (String, Vec<Relabeling>) {
    let mut best: Option<String> = None;
    let mut isos = Vec::new();
    for start in 0..g.len() {
        for p in s4_ordered() {
            let (s, iso) = signature_from(g, start, p);
            match &best {
                Some(b) if s > *b => {}
                Some(b) if s == *b => isos.push(iso),
                _ => {
                    best = Some(s);
                    isos = vec![iso];
                }
            }
        }
    }
    (best.expect("nonempty triangulation"), isos)
}

/// Taut angles transported along a relabeling.
pub fn relabel_angles(angles: &[u8], iso: &Relabeling) -> Vec<u8> {
    let mut out = vec![0u8; angles.len()];
    for (t, &a) in angles.iter().enumerate() {
        let [x, y] = EDGE_VERTICES[a as usize];
        let m = iso.vmap[t];
        out[iso.image[t]] = edge_pair(edge_number(m[x as usize], m[y as usize]));
    }
    out
}

/// Decode `<isosig>_<angles>` and check all triangulation invariants.
pub fn decode_taut_signature(sig: &str) -> Result<TautVeeringTriangulation, SignatureError> {
    let sig = sig.trim();
    let mut parts = sig.split('_');
    let iso = parts.next().unwrap_or_default();
    let angles = parts
        .next()
        .ok_or_else(|| malformed("missing taut angle suffix (expected <isosig>_<angles>)"))?;
    if parts.next().is_some() {
        return Err(SignatureError::UnsupportedVersion(
            "extra fields after the taut angle suffix".into(),
        ));
    }
    let gluings = decode_isosig(iso)?;
    let angles: Vec<u8> = angles
        .bytes()
        .map(|c| match c {
            b'0'..=b'2' => Ok(c - b'0'),
            _ => Err(malformed(format!(
                "taut angle {:?} is not 0, 1 or 2",
                c as char
            ))),
        })
        .collect::<Result<_, _>>()?;
    if angles.len() != gluings.len() {
        return Err(malformed(format!(
            "{} taut angles for {} tetrahedra",
            angles.len(),
            gluings.len()
        )));
    }
    Ok(TautVeeringTriangulation::new(gluings, angles)?)
}

/// Canonical `<isosig>_<angles>` string: least isosig, then the least angle
/// string among the relabelings realizing it.
pub fn encode_taut_signature(tri: &TautVeeringTriangulation) -> String {
    let (sig, isos) = canonical_signature(tri.gluings());
    let angles = isos
        .iter()
        .map(|iso| relabel_angles(tri.taut_angles(), iso))
        .min()
        .expect("at least one relabeling");
    let digits: String = angles.iter().map(|a| (b'0' + a) as char).collect();
    format!("{sig}_{digits}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_eight_round_trip() {
        let t = decode_taut_signature("cPcbbbiht_12").unwrap();
        assert_eq!(t.n(), 2);
        assert_eq!(encode_taut_signature(&t), "cPcbbbiht_12");
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(
            decode_taut_signature("x"),
            Err(SignatureError::MalformedSignature(_))
        ));
        assert!(matches!(
            decode_taut_signature("cPcbbbiht"),
            Err(SignatureError::MalformedSignature(_))
        ));
        assert!(matches!(
            decode_taut_signature("cPcbbbiht_1"),
            Err(SignatureError::MalformedSignature(_))
        ));
        assert!(matches!(
            decode_taut_signature("cPcbbbiht_12_x"),
            Err(SignatureError::UnsupportedVersion(_))
        ));
        assert!(matches!(
            decode_taut_signature("c*cbbbiht_12"),
            Err(SignatureError::MalformedSignature(_))
        ));
    }

    #[test]
    fn ordered_s4_is_lexicographic() {
        let s = s4_ordered();
        assert_eq!(s.len(), 24);
        assert_eq!(s[0], IDENTITY);
        assert_eq!(s[23], [3, 2, 1, 0]);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }
}
