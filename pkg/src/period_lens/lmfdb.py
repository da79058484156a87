"""HTTP client for newform Fourier data, with a local file cache.

Endpoint templates (configurable; defaults target the public API):

    {base}/api/mf_newforms/?label={label}&_format=json
        -> orbit metadata: level, weight, dim, fricke_eigenval, traces
    {base}/api/mf_hecke_cc/?label={label}.{conrey}.{j}&_format=json
        -> one complex embedding's normalized coefficients (dim > 1 orbits)

Rational (dim-1) orbits take their exact integer coefficients from the
orbit traces. Responses are cached as the canonical newform file format
under cache_dir/<label>.json; a warm cache never touches the network.
Requests are serialized with a configurable delay.
"""

from __future__ import annotations

import os
import re
import threading
import time
import warnings
from fractions import Fraction
from pathlib import Path

import httpx

from .lfunction import fricke_sign_self_check
from .newforms import (Newform, NewformError, expected_fe_sign, normalized,
                       parse_newform, save_newform, validate_newform)
from .precision import PrecisionPolicy, DEFAULT_POLICY

CACHE_ENV_VAR = "PERIOD_LENS_CACHE"
LABEL_RE = re.compile(r"^(\d+)\.(\d+)\.([a-z]+)\.([a-z]+)$")


class LmfdbError(RuntimeError):
    pass


def resolve_cache_dir(cache_dir: str | os.PathLike | None) -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    if cache_dir is not None:
        return Path(cache_dir)
    return Path.home() / ".cache" / "period-lens"


class LmfdbClient:
    """Serialized, cached fetcher for newform records."""

    def __init__(self, cache_dir=None, base_url: str = "https://www.lmfdb.org",
                 delay_seconds: float = 0.5, offline: bool = False,
                 transport: httpx.BaseTransport | None = None,
                 policy: PrecisionPolicy = DEFAULT_POLICY):
        if delay_seconds < 0.5:
            delay_seconds = 0.5
        self.cache_dir = resolve_cache_dir(cache_dir)
        self.base_url = base_url.rstrip("/")
        self.delay_seconds = delay_seconds
        self.offline = offline
        self.policy = policy
        self._lock = threading.Lock()
        self._last_request = 0.0
        self._client = httpx.Client(transport=transport, timeout=30.0)

    def close(self) -> None:
        self._client.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def cache_path(self, label: str) -> Path:
        return self.cache_dir / f"{label}.json"

    def fetch(self, label: str, embedding: int = 0) -> Newform:
        """Newform for an LMFDB label, from cache or the remote API."""
        if not LABEL_RE.match(label):
            raise LmfdbError(f"malformed label {label!r} (expected N.k.x.y)")
        cached = self.cache_path(label)
        if cached.exists():
            return parse_newform(cached)
        if self.offline:
            raise LmfdbError(f"offline and no cached record for {label}")
        nf = self._fetch_remote(label, embedding)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        save_newform(nf, cached)
        return parse_newform(cached)

    # -- internals ---------------------------------------------------------

    def _get_json(self, url: str) -> dict:
        with self._lock:
            wait = self.delay_seconds - (time.monotonic() - self._last_request)
            if wait > 0:
                time.sleep(wait)
            try:
                resp = self._client.get(url)
            except httpx.HTTPError as exc:
                raise LmfdbError(f"network failure fetching {url}: {exc}") from exc
            finally:
                self._last_request = time.monotonic()
        if resp.status_code != 200:
            raise LmfdbError(f"HTTP {resp.status_code} from {url}")
        return resp.json()

    def _fetch_remote(self, label: str, embedding: int) -> Newform:
        match = LABEL_RE.match(label)
        level, weight = int(match.group(1)), int(match.group(2))
        doc = self._get_json(f"{self.base_url}/api/mf_newforms/?label={label}&_format=json")
        data = doc.get("data") or []
        if not data:
            raise LmfdbError(f"label {label} not found")
        rec = data[0]
        if int(rec.get("level", level)) != level or int(rec.get("weight", weight)) != weight:
            raise LmfdbError(f"record for {label} disagrees with the label")
        dim = int(rec.get("dim", 1))
        fricke = rec.get("fricke_eigenval")

        if dim == 1:
            traces = rec.get("traces")
            if not traces:
                raise LmfdbError(f"record for {label} carries no coefficient traces")
            an = tuple(Fraction(int(t)) for t in traces)
            kind, digits = "rational", None
        else:
            an, digits = self._fetch_embedding(label, rec, embedding)
            kind = "embedded"

        candidate_sign = int(fricke) if fricke is not None else 1
        nf = Newform(
            level=level, weight=weight,
            fricke_sign=candidate_sign,
            fe_sign=expected_fe_sign(weight, candidate_sign),
            coeff_kind=kind, an=an, label=label, source="lmfdb",
            precision_decimal_digits=digits,
            metadata={"embedding_index": embedding} if dim > 1 else {},
        )
        nf = validate_newform(normalized(nf))
        check = fricke_sign_self_check(nf, self.policy)
        if fricke is None:
            if not check["conclusive"]:
                raise LmfdbError(
                    f"record for {label} lacks a Fricke eigenvalue and the "
                    f"functional-equation self-check is inconclusive"
                )
            sign = check["best"]
            nf = Newform(
                level=level, weight=weight, fricke_sign=sign,
                fe_sign=expected_fe_sign(weight, sign),
                coeff_kind=kind, an=an, label=label, source="lmfdb",
                precision_decimal_digits=digits, metadata=dict(nf.metadata),
            )
            nf = validate_newform(nf)
        elif not check["consistent"]:
            raise LmfdbError(
                f"declared Fricke eigenvalue for {label} contradicts the "
                f"functional-equation self-check"
            )
        return nf

    def _fetch_embedding(self, label: str, rec: dict, embedding: int):
        emb_labels = rec.get("embedding_labels")
        if emb_labels:
            if embedding >= len(emb_labels):
                raise LmfdbError(f"embedding index {embedding} out of range for {label}")
            emb_label = emb_labels[embedding]
        else:
            emb_label = f"{label}.{embedding + 1}.1"
        doc = self._get_json(f"{self.base_url}/api/mf_hecke_cc/?label={emb_label}&_format=json")
        data = doc.get("data") or []
        if not data:
            raise LmfdbError(f"no embedding data for {emb_label}")
        pairs = data[0].get("an_normalized")
        if not pairs:
            raise LmfdbError(f"embedding record for {emb_label} carries no coefficients")
        weight = int(rec["weight"])
        digits = 12
        out = []
        for n, (re_part, im_part) in enumerate(pairs, start=1):
            if abs(float(im_part)) > 1e-8:
                warnings.warn(f"embedding {emb_label}: a({n}) has imaginary part {im_part}")
            # analytic normalization a(n)/n^{(k-1)/2} is what the API serves
            out.append(repr(float(re_part) * n ** ((weight - 1) / 2)))
        return tuple(out), digits
