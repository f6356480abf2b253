#!/usr/bin/env python3
"""Reads a generated dataset the way a trainer would and checks its layout."""
import json
import os
import struct
import sys


def raster(path):
    with open(path, "rb") as f:
        data = f.read()
    assert data[:8] == b"PXNRAST1", path
    w, h, c = struct.unpack("<III", data[8:20])
    assert len(data) == 20 + 4 * w * h * c, path
    return w, h, c, struct.unpack("<%df" % (w * h * c), data[20:])


def main(root):
    meta = json.load(open(os.path.join(root, "dataset.json")))
    assert meta["format"] == "pixnav-dataset/1"
    w, h = meta["intrinsics"]["width"], meta["intrinsics"]["height"]
    n = 0
    with open(os.path.join(root, "manifest.jsonl")) as f:
        for line in f:
            s = json.loads(line)
            dw, dh, dc, depth = raster(os.path.join(root, s["depth"]))
            gw, gh, gc, _ = raster(os.path.join(root, s["grad"]))
            assert (dw, dh, dc) == (w, h, 1)
            assert (gw, gh, gc) == (w, h, 2)
            assert all(v >= 0 for v in depth)
            assert os.path.exists(os.path.join(root, s["color"]))
            for key in ("goto", "lookat"):
                x, y = s[key]
                assert 0 <= x <= w - 1 and 0 <= y <= h - 1, (key, x, y)
            assert isinstance(s["fallback"], bool)
            n += 1
    assert n == meta["count"], (n, meta["count"])
    print("read %d samples" % n)


if __name__ == "__main__":
    main(sys.argv[1])
