#!/usr/bin/env python3
# Copyright 2026 The srbench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Converts pristine NIQE parameters stored as .npz (mu_pris_param,
cov_pris_param) into the srbench binary model container."""

import argparse
import struct

import numpy as np

MAGIC = b"SRBNIQE\0"
VERSION = 1


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("npz")
    ap.add_argument("out")
    ap.add_argument("--patch-size", type=int, default=96)
    ap.add_argument("--threshold", type=float, default=0.75)
    args = ap.parse_args()

    params = np.load(args.npz)
    mu = np.asarray(params["mu_pris_param"], dtype="<f8").reshape(-1)
    cov = np.asarray(params["cov_pris_param"], dtype="<f8")
    n = mu.size
    if cov.shape != (n, n):
        raise SystemExit(f"covariance shape {cov.shape} does not match {n}")

    with open(args.out, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<B", VERSION))
        f.write(struct.pack("<II", n, args.patch_size))
        f.write(struct.pack("<d", args.threshold))
        f.write(mu.tobytes())
        f.write(np.ascontiguousarray(cov).tobytes())


if __name__ == "__main__":
    main()
