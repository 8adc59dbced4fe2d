use super::GaitError;

/// Points closer than this are treated as one contact.
pub const DEDUP_TOLERANCE: f64 = 1e-9;

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Convex hull of the ground contacts, counter-clockwise, starting from the
/// vertex with the smallest x (then y). Collinear boundary points are dropped.
pub fn support_polygon(points: &[[f64; 2]]) -> Result<Vec<[f64; 2]>, GaitError> {
    let mut distinct: Vec<[f64; 2]> = Vec::with_capacity(points.len());
    for &p in points {
        if !distinct.iter().any(|&q| dist(p, q) <= DEDUP_TOLERANCE) {
            distinct.push(p);
        }
    }
    let degenerate = |n| GaitError::DegenerateSupport { distinct: n };
    if distinct.len() < 3 {
        return Err(degenerate(distinct.len()));
    }

    distinct.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));

    // Andrew's monotone chain
    let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * distinct.len());
    for &p in &distinct {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in distinct.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();

    if hull.len() < 3 {
        return Err(degenerate(distinct.len()));
    }
    // reject slivers: every vertex within tolerance of one line
    let anchor = hull[0];
    let far = hull
        .iter()
        .copied()
        .max_by(|a, b| dist(anchor, *a).total_cmp(&dist(anchor, *b)))
        .expect("non-empty hull");
    let span = dist(anchor, far);
    let thick = hull
        .iter()
        .any(|&p| (cross(anchor, far, p) / span).abs() > DEDUP_TOLERANCE);
    if !thick {
        return Err(degenerate(distinct.len()));
    }
    Ok(hull)
}

/// Signed static stability margin: the smallest distance from `com` to any
/// edge line of the counter-clockwise `polygon`, positive on the inner side.
pub fn stability_margin(polygon: &[[f64; 2]], com: [f64; 2]) -> f64 {
    let n = polygon.len();
    (0..n)
        .map(|i| {
            let (a, b) = (polygon[i], polygon[(i + 1) % n]);
            cross(a, b, com) / dist(a, b)
        })
        .fold(f64::INFINITY, f64::min)
}
