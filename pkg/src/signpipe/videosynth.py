"""Text to gesture video: keyframes, duplication, flow-based interpolation.

Text renders as 1 FPS keyframes from a letter atlas, duplicates to 24 FPS
(pure copies), then resamples to 60 FPS. Output frames whose time aligns
with a source frame are bit-exact copies; the rest are synthesized between
the bracketing frames, either by crossfade or by block-matching flow with a
context-based occlusion heuristic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .imageops import round_half_up_u8
from .io import read_pgm, sha256_file, write_pgm
from .labels import LETTERS, SPACE

BLOCK_SIZE = 8
SEARCH_RADIUS = 8
OCCLUSION_THRESHOLD = 24.0
OCCLUSION_DAMPING = 0.25
ATLAS_SIZE = 128


@dataclass(frozen=True)
class GestureAtlas:
    """Letter -> frame map; SPACE is the all-black rest frame."""

    frames: dict[str, np.ndarray]
    size: int = ATLAS_SIZE

    def __post_init__(self):
        missing = [c for c in LETTERS + (SPACE,) if c not in self.frames]
        if missing:
            raise ValueError(f"atlas is missing entries: {missing}")
        for name, img in self.frames.items():
            if img.shape != (self.size, self.size) or img.dtype != np.uint8:
                raise ValueError(
                    f"atlas[{name}] must be {self.size}x{self.size} uint8, "
                    f"got {img.shape} {img.dtype}"
                )


@dataclass(frozen=True)
class FrameSequence:
    """Frames at 1, 24, or 60 FPS; n_sources is the keyframe count."""

    frames: np.ndarray  # (T, H, W) uint8
    fps: int
    n_sources: int

    def __post_init__(self):
        if self.fps not in (1, 24, 60):
            raise ValueError(f"fps must be 1, 24, or 60, got {self.fps}")
        if self.frames.ndim != 3 or self.frames.dtype != np.uint8:
            raise ValueError("frames must be a (T, H, W) uint8 array")
        if len(self.frames) != self.fps * self.n_sources:
            raise ValueError(
                f"{len(self.frames)} frames inconsistent with "
                f"{self.fps} FPS x {self.n_sources} keyframes"
            )


@dataclass(frozen=True)
class FlowField:
    """Backward-warp displacements toward each endpoint, (…, 2) as (dx, dy)."""

    f_t0: np.ndarray
    f_t1: np.ndarray

    def __post_init__(self):
        if self.f_t0.shape != self.f_t1.shape or self.f_t0.shape[-1] != 2:
            raise ValueError("flow maps must share an (H, W, 2) shape")


@dataclass(frozen=True)
class ContextFeatures:
    """3x3 local mean maps of the two endpoint frames."""

    c0: np.ndarray
    c1: np.ndarray

    def __post_init__(self):
        if self.c0.shape != self.c1.shape:
            raise ValueError("context maps must share a shape")


def text_to_keyframes(text: str, atlas: GestureAtlas) -> FrameSequence:
    """One keyframe per character; SPACE maps to the blank frame."""
    bad = sorted(set(text) - set(LETTERS) - {" "})
    if bad:
        raise ValueError(f"cannot render characters {bad}: only A-Z and space are signable")
    if not text:
        raise ValueError("cannot render empty text")
    frames = np.stack([atlas.frames[SPACE if c == " " else c] for c in text])
    return FrameSequence(frames=frames, fps=1, n_sources=len(text))


def duplicate_frames(seq: FrameSequence) -> FrameSequence:
    """1 -> 24 FPS by repetition: frame i copies source floor(i/24)."""
    if seq.fps != 1:
        raise ValueError(f"expected a 1 FPS sequence, got {seq.fps}")
    return FrameSequence(
        frames=np.repeat(seq.frames, 24, axis=0), fps=24, n_sources=seq.n_sources
    )


def _block_flow(i0: np.ndarray, i1: np.ndarray) -> np.ndarray:
    """Per-pixel forward displacement i0 -> i1 from 8x8 block SAD search.

    Zero displacement is evaluated first and later candidates must strictly
    improve, so ties (including flat regions) resolve to zero. Candidates
    whose window leaves the image score infinity.
    """
    if i0.shape != i1.shape:
        raise ValueError(f"frame shapes differ: {i0.shape} vs {i1.shape}")
    h, w = i0.shape
    if np.array_equal(i0, i1):
        return np.zeros((h, w, 2))
    rows = np.arange(0, h, BLOCK_SIZE)
    cols = np.arange(0, w, BLOCK_SIZE)
    a = i0.astype(np.float64)
    padded = np.full((h + 2 * SEARCH_RADIUS, w + 2 * SEARCH_RADIUS), np.inf)
    padded[SEARCH_RADIUS : SEARCH_RADIUS + h, SEARCH_RADIUS : SEARCH_RADIUS + w] = i1

    displacements = [(0, 0)] + [
        (dx, dy)
        for dy in range(-SEARCH_RADIUS, SEARCH_RADIUS + 1)
        for dx in range(-SEARCH_RADIUS, SEARCH_RADIUS + 1)
        if (dx, dy) != (0, 0)
    ]
    best_cost = None
    best_dx = np.zeros((len(rows), len(cols)))
    best_dy = np.zeros((len(rows), len(cols)))
    for dx, dy in displacements:
        window = padded[
            SEARCH_RADIUS + dy : SEARCH_RADIUS + dy + h,
            SEARCH_RADIUS + dx : SEARCH_RADIUS + dx + w,
        ]
        diff = np.abs(a - window)
        cost = np.add.reduceat(np.add.reduceat(diff, rows, axis=0), cols, axis=1)
        if best_cost is None:
            best_cost = cost
            continue
        better = cost < best_cost
        best_cost = np.where(better, cost, best_cost)
        best_dx = np.where(better, dx, best_dx)
        best_dy = np.where(better, dy, best_dy)

    row_sizes = np.diff(np.append(rows, h))
    col_sizes = np.diff(np.append(cols, w))
    dx_full = np.repeat(np.repeat(best_dx, row_sizes, axis=0), col_sizes, axis=1)
    dy_full = np.repeat(np.repeat(best_dy, row_sizes, axis=0), col_sizes, axis=1)
    return np.stack([dx_full, dy_full], axis=-1)


def _scale_flow(f01: np.ndarray, t: float) -> FlowField:
    return FlowField(f_t0=-t * f01, f_t1=(1.0 - t) * f01)


def estimate_flow(i0: np.ndarray, i1: np.ndarray, t: float) -> FlowField:
    """Block-matching flow between endpoints, scaled to intermediate time t."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must be in (0, 1), got {t}")
    return _scale_flow(_block_flow(i0, i1), t)


def context_features(i0: np.ndarray, i1: np.ndarray) -> ContextFeatures:
    """3x3 box means with edge replication."""
    return ContextFeatures(c0=_box_mean(i0), c1=_box_mean(i1))


def _box_mean(img: np.ndarray) -> np.ndarray:
    padded = np.pad(img.astype(np.float64), 1, mode="edge")
    out = np.zeros(img.shape, dtype=np.float64)
    for dy in range(3):
        for dx in range(3):
            out += padded[dy : dy + img.shape[0], dx : dx + img.shape[1]]
    return out / 9.0


def _backward_warp(img: np.ndarray, flow: np.ndarray) -> np.ndarray:
    """Sample img at (x + dx, y + dy) with bilinear filtering, edge clamp."""
    h, w = img.shape
    src = img.astype(np.float64)
    ys, xs = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    sx = np.clip(xs + flow[..., 0], 0.0, w - 1.0)
    sy = np.clip(ys + flow[..., 1], 0.0, h - 1.0)
    x0 = np.floor(sx).astype(np.intp)
    y0 = np.floor(sy).astype(np.intp)
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    fx = sx - x0
    fy = sy - y0
    top = src[y0, x0] * (1 - fx) + src[y0, x1] * fx
    bottom = src[y1, x0] * (1 - fx) + src[y1, x1] * fx
    return top * (1 - fy) + bottom * fy


def synthesize_frame(
    i0: np.ndarray,
    i1: np.ndarray,
    flows: FlowField,
    contexts: ContextFeatures,
    t: float,
    occlusion_threshold: float = OCCLUSION_THRESHOLD,
    occlusion_damping: float = OCCLUSION_DAMPING,
) -> np.ndarray:
    """Warp both endpoints toward time t and fuse as (1-t)*warp0 + t*warp1.

    Where the warped context maps disagree by more than the threshold, the
    temporally farther endpoint is down-weighted (occlusion heuristic) and
    the weights renormalized; at t = 0.5 both endpoints are equally near, so
    no down-weighting applies.
    """
    warp0 = _backward_warp(i0, flows.f_t0)
    warp1 = _backward_warp(i1, flows.f_t1)
    wc0 = _backward_warp(contexts.c0, flows.f_t0)
    wc1 = _backward_warp(contexts.c1, flows.f_t1)
    w0 = np.full(warp0.shape, 1.0 - t)
    w1 = np.full(warp1.shape, t)
    disagree = np.abs(wc0 - wc1) > occlusion_threshold
    if t < 0.5:
        w1 = np.where(disagree, w1 * occlusion_damping, w1)
    elif t > 0.5:
        w0 = np.where(disagree, w0 * occlusion_damping, w0)
    total = w0 + w1
    return round_half_up_u8((w0 * warp0 + w1 * warp1) / total)


def interpolate_sequence(seq: FrameSequence, method: str = "flow") -> FrameSequence:
    """24 -> 60 FPS. Output j covers time j/60; when that hits a source time
    (every 5th output, since lcm(24,60)=120) the source frame is copied
    bit-exactly, otherwise the bracketing frames synthesize it."""
    if seq.fps != 24:
        raise ValueError(f"expected a 24 FPS sequence, got {seq.fps}")
    if method not in ("flow", "crossfade"):
        raise ValueError(f"method must be 'flow' or 'crossfade', got {method!r}")
    frames = seq.frames
    t_in = len(frames)
    out = np.empty((60 * seq.n_sources,) + frames.shape[1:], dtype=np.uint8)
    flow_cache: dict[int, np.ndarray] = {}
    ctx_cache: dict[int, ContextFeatures] = {}
    for j in range(len(out)):
        num = 24 * j  # source position = num/60 = j * 24/60
        if num % 60 == 0:
            out[j] = frames[num // 60]
            continue
        pos = num / 60.0
        idx0 = int(np.floor(pos))
        idx1 = min(idx0 + 1, t_in - 1)
        t = pos - idx0
        i0, i1 = frames[idx0], frames[idx1]
        if method == "crossfade":
            out[j] = round_half_up_u8((1.0 - t) * i0 + t * i1)
            continue
        if idx0 not in flow_cache:
            flow_cache[idx0] = _block_flow(i0, i1)
            ctx_cache[idx0] = context_features(i0, i1)
        out[j] = synthesize_frame(i0, i1, _scale_flow(flow_cache[idx0], t), ctx_cache[idx0], t)
    return FrameSequence(frames=out, fps=60, n_sources=seq.n_sources)


def write_sequence(seq: FrameSequence, directory: str | Path) -> Path:
    """Write numbered PGM frames plus a manifest with per-frame checksums."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, frame in enumerate(seq.frames):
        name = f"frame_{i:06d}.pgm"
        write_pgm(directory / name, frame)
        entries.append({"file": name, "sha256": sha256_file(directory / name)})
    manifest = {
        "schema": "frames/1",
        "fps": seq.fps,
        "n_sources": seq.n_sources,
        "frame_count": len(seq.frames),
        "height": int(seq.frames.shape[1]),
        "width": int(seq.frames.shape[2]),
        "frames": entries,
    }
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path


def read_sequence(directory: str | Path) -> FrameSequence:
    """Read a written sequence back, verifying every frame checksum."""
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text(encoding="utf-8"))
    if manifest.get("schema") != "frames/1":
        raise ValueError(f"{directory}: unknown manifest schema {manifest.get('schema')!r}")
    frames = []
    for entry in manifest["frames"]:
        path = directory / entry["file"]
        actual = sha256_file(path)
        if actual != entry["sha256"]:
            raise ValueError(f"{path}: checksum mismatch (file tampered or corrupt)")
        frames.append(read_pgm(path))
    if len(frames) != manifest["frame_count"]:
        raise ValueError(
            f"{directory}: manifest lists {manifest['frame_count']} frames, found {len(frames)}"
        )
    return FrameSequence(
        frames=np.stack(frames), fps=manifest["fps"], n_sources=manifest["n_sources"]
    )
