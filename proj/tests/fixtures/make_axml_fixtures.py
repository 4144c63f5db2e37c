#!/usr/bin/env python3
"""Generates the committed Android binary-XML fixtures and their golden trees.

Each fixture is described as a plain element structure below. The same
description is encoded to the binary chunked format (*.axml) and rendered to
the canonical text form (*.golden.txt), so the committed pair never depends on
the C++ decoder under test.

Run from this directory: python3 make_axml_fixtures.py
Outputs are committed; regeneration should be byte-identical.
"""

import struct
from pathlib import Path

ANDROID_NS = "http://schemas.android.com/apk/res/android"

RES_STRING_POOL = 0x0001
RES_XML = 0x0003
RES_XML_START_NS = 0x0100
RES_XML_END_NS = 0x0101
RES_XML_START_EL = 0x0102
RES_XML_END_EL = 0x0103
RES_XML_RESOURCE_MAP = 0x0180
UTF8_FLAG = 1 << 8
NO_ENTRY = 0xFFFFFFFF

TYPE_REFERENCE = 0x01
TYPE_STRING = 0x03
TYPE_INT_DEC = 0x10
TYPE_INT_HEX = 0x11
TYPE_INT_BOOLEAN = 0x12


def element(name, attrs=None, children=None, ns=None):
    return {"name": name, "ns": ns, "attrs": attrs or [], "children": children or []}


# ---------------------------------------------------------------------------
# Binary encoding


class StringPool:
    def __init__(self, utf8):
        self.utf8 = utf8
        self.strings = []
        self.index = {}

    def add(self, value):
        if value not in self.index:
            self.index[value] = len(self.strings)
            self.strings.append(value)
        return self.index[value]

    def encode(self):
        data = b""
        offsets = []
        for s in self.strings:
            offsets.append(len(data))
            if self.utf8:
                raw = s.encode("utf-8")
                units = len(s.encode("utf-16-le")) // 2
                data += _len8(units) + _len8(len(raw)) + raw + b"\x00"
            else:
                raw = s.encode("utf-16-le")
                data += _len16(len(raw) // 2) + raw + b"\x00\x00"
        while len(data) % 4:
            data += b"\x00"
        strings_start = 28 + 4 * len(self.strings)
        size = strings_start + len(data)
        header = struct.pack(
            "<HHIIIIII",
            RES_STRING_POOL,
            28,
            size,
            len(self.strings),
            0,
            UTF8_FLAG if self.utf8 else 0,
            strings_start,
            0,
        )
        return header + b"".join(struct.pack("<I", o) for o in offsets) + data


def _len8(n):
    assert n < 0x8000
    if n < 0x80:
        return bytes([n])
    return bytes([0x80 | (n >> 8), n & 0xFF])


def _len16(n):
    assert n < 0x8000
    return struct.pack("<H", n)


def _node(chunk_type, body, line=1):
    # ResXMLTree_node: chunk header (8) + line number + comment ref.
    return struct.pack("<HHIII", chunk_type, 16, 16 + len(body), line, NO_ENTRY) + body


def _value(pool, value):
    kind, payload = value
    if kind == "str":
        idx = pool.add(payload)
        return idx, TYPE_STRING, idx
    if kind == "bool":
        return NO_ENTRY, TYPE_INT_BOOLEAN, 0xFFFFFFFF if payload else 0
    if kind == "int":
        return NO_ENTRY, TYPE_INT_DEC, payload & 0xFFFFFFFF
    if kind == "hexint":
        return NO_ENTRY, TYPE_INT_HEX, payload & 0xFFFFFFFF
    if kind == "ref":
        return NO_ENTRY, TYPE_REFERENCE, payload
    raise ValueError(kind)


def _collect_strings(el, pool):
    # Attribute names first mirrors aapt's habit of pooling resource-mapped
    # names early; any order decodes the same.
    for ns, name, _ in el["attrs"]:
        if ns:
            pool.add(ns)
        pool.add(name)
    if el["ns"]:
        pool.add(el["ns"])
    pool.add(el["name"])
    for ns, name, value in el["attrs"]:
        if value[0] == "str":
            pool.add(value[1])
    for child in el["children"]:
        _collect_strings(child, pool)


def _encode_element(el, pool, line=2):
    ns_idx = pool.add(el["ns"]) if el["ns"] else NO_ENTRY
    name_idx = pool.add(el["name"])
    attrs = b""
    for ns, name, value in el["attrs"]:
        attr_ns = pool.add(ns) if ns else NO_ENTRY
        attr_name = pool.add(name)
        raw, vtype, data = _value(pool, value)
        attrs += struct.pack("<IIIHBBI", attr_ns, attr_name, raw, 8, 0, vtype, data)
    ext = struct.pack("<IIHHHHHH", ns_idx, name_idx, 20, 20, len(el["attrs"]), 0, 0, 0)
    out = _node(RES_XML_START_EL, ext + attrs, line)
    for child in el["children"]:
        out += _encode_element(child, pool, line + 1)
    out += _node(RES_XML_END_EL, struct.pack("<II", ns_idx, name_idx), line)
    return out


def encode_axml(root, nsmap, utf8=False, resource_map_ids=None, unknown_chunk=False):
    pool = StringPool(utf8)
    for prefix, uri in nsmap:
        pool.add(prefix)
        pool.add(uri)
    _collect_strings(root, pool)

    chunks = b""
    if resource_map_ids:
        chunks += struct.pack("<HHI", RES_XML_RESOURCE_MAP, 8, 8 + 4 * len(resource_map_ids))
        chunks += b"".join(struct.pack("<I", rid) for rid in resource_map_ids)
    for prefix, uri in nsmap:
        chunks += _node(RES_XML_START_NS, struct.pack("<II", pool.add(prefix), pool.add(uri)))
    if unknown_chunk:
        chunks += struct.pack("<HHI", 0x5678, 8, 12) + b"\xde\xad\xbe\xef"
    chunks += _encode_element(root, pool)
    for prefix, uri in reversed(nsmap):
        chunks += _node(RES_XML_END_NS, struct.pack("<II", pool.add(prefix), pool.add(uri)))

    body = pool.encode() + chunks
    return struct.pack("<HHI", RES_XML, 8, 8 + len(body)) + body


# ---------------------------------------------------------------------------
# Canonical text rendering (mirrors the library's golden-tree format)


def _escape(text):
    out = []
    for c in text:
        if c == "&":
            out.append("&amp;")
        elif c == "<":
            out.append("&lt;")
        elif c == ">":
            out.append("&gt;")
        elif c == '"':
            out.append("&quot;")
        else:
            out.append(c)
    return "".join(out)


def _value_text(value):
    kind, payload = value
    if kind == "str":
        return payload
    if kind == "bool":
        return "true" if payload else "false"
    if kind in ("int", "hexint"):
        u32 = payload & 0xFFFFFFFF
        return str(u32 - (1 << 32) if u32 & 0x80000000 else u32)
    if kind == "ref":
        return "@0x%08x" % payload
    raise ValueError(kind)


def _qname(nsmap, ns, name):
    if not ns:
        return name
    for prefix, uri in nsmap:
        if uri == ns:
            return name if not prefix else prefix + ":" + name
    return "{" + ns + "}" + name


def render_canonical(el, nsmap, depth=0):
    pad = "  " * depth
    qname = _qname(nsmap, el["ns"], el["name"])
    line = pad + "<" + qname
    if depth == 0:
        for prefix, uri in nsmap:
            decl = " xmlns=" if not prefix else " xmlns:" + prefix + "="
            line += decl + '"' + _escape(uri) + '"'
    for ns, name, value in el["attrs"]:
        line += " " + _qname(nsmap, ns, name) + '="' + _escape(_value_text(value)) + '"'
    if not el["children"]:
        return line + "/>\n"
    out = line + ">\n"
    for child in el["children"]:
        out += render_canonical(child, nsmap, depth + 1)
    return out + pad + "</" + qname + ">\n"


# ---------------------------------------------------------------------------
# Fixture definitions

A = ANDROID_NS


def perm(name):
    return element("uses-permission", attrs=[(A, "name", ("str", name))])


FIXTURES = {
    # Minimal manifest, 16-bit string pool.
    "01_simple_utf16": {
        "nsmap": [("android", A)],
        "utf8": False,
        "root": element(
            "manifest",
            attrs=[(None, "package", ("str", "com.example.simple"))],
            children=[perm("android.permission.INTERNET")],
        ),
    },
    # 8-bit pool with multi-byte UTF-8 and uses-permission-sdk-23.
    "02_simple_utf8": {
        "nsmap": [("android", A)],
        "utf8": True,
        "root": element(
            "manifest",
            attrs=[(None, "package", ("str", "com.例え.unicode"))],
            children=[
                perm("android.permission.READ_PHONE_STATE"),
                element(
                    "uses-permission-sdk-23",
                    attrs=[(A, "name", ("str", "android.permission.ACCESS_COARSE_LOCATION"))],
                ),
                element("application", attrs=[(A, "label", ("str", "Ünïcode \"Dèmo\" <&> 😀 app"))]),
            ],
        ),
    },
    # Intent filters nested under an activity and a receiver.
    "03_intents_nested": {
        "nsmap": [("android", A)],
        "utf8": False,
        "root": element(
            "manifest",
            attrs=[(None, "package", ("str", "com.example.intents"))],
            children=[
                perm("android.permission.RECEIVE_BOOT_COMPLETED"),
                element(
                    "application",
                    attrs=[(A, "label", ("str", "Intents 😀 demo"))],
                    children=[
                        element(
                            "activity",
                            attrs=[(A, "name", ("str", ".MainActivity"))],
                            children=[
                                element(
                                    "intent-filter",
                                    children=[
                                        element("action", attrs=[(A, "name", ("str", "android.intent.action.MAIN"))]),
                                        element(
                                            "category",
                                            attrs=[(A, "name", ("str", "android.intent.category.LAUNCHER"))],
                                        ),
                                    ],
                                ),
                            ],
                        ),
                        element(
                            "receiver",
                            attrs=[(A, "name", ("str", ".BootReceiver"))],
                            children=[
                                element(
                                    "intent-filter",
                                    children=[
                                        element(
                                            "action",
                                            attrs=[(A, "name", ("str", "android.intent.action.BOOT_COMPLETED"))],
                                        ),
                                        element(
                                            "category", attrs=[(A, "name", ("str", "android.intent.category.HOME"))]
                                        ),
                                    ],
                                ),
                            ],
                        ),
                    ],
                ),
            ],
        ),
    },
    # Typed attribute values: booleans, decimal and hex integers, references.
    "04_typed_values": {
        "nsmap": [("android", A)],
        "utf8": True,
        "root": element(
            "manifest",
            attrs=[(None, "package", ("str", "com.example.typed")), (A, "versionCode", ("int", 42))],
            children=[
                element(
                    "application",
                    attrs=[
                        (A, "label", ("ref", 0x7F040001)),
                        (A, "debuggable", ("bool", True)),
                        (A, "vmSafeMode", ("bool", False)),
                        (A, "maxRecents", ("hexint", 0x10)),
                        (A, "minSdkVersion", ("int", -1)),
                    ],
                    children=[
                        element(
                            "service",
                            attrs=[(A, "name", ("str", ".SyncService")), (A, "exported", ("bool", False))],
                            children=[
                                element(
                                    "intent-filter",
                                    children=[
                                        element(
                                            "action", attrs=[(A, "name", ("str", "com.example.typed.SYNC"))]
                                        )
                                    ],
                                )
                            ],
                        )
                    ],
                ),
                perm("android.permission.WAKE_LOCK"),
            ],
        ),
    },
    # Resource map chunk plus an unknown chunk type the decoder must skip.
    "05_resmap_unknown_chunk": {
        "nsmap": [("android", A)],
        "utf8": False,
        "resource_map_ids": [0x01010003, 0x0101000F],
        "unknown_chunk": True,
        "root": element(
            "manifest",
            attrs=[(None, "package", ("str", "com.example.resmap"))],
            children=[
                perm("android.permission.SEND_SMS"),
                perm("android.permission.READ_SMS"),
            ],
        ),
    },
    # Vendor-custom intent names seen in real corpora.
    "06_vendor_intents": {
        "nsmap": [("android", A)],
        "utf8": False,
        "root": element(
            "manifest",
            attrs=[(None, "package", ("str", "com.example.vendor"))],
            children=[
                element(
                    "application",
                    children=[
                        element(
                            "receiver",
                            attrs=[(A, "name", ("str", ".PushReceiver"))],
                            children=[
                                element(
                                    "intent-filter",
                                    children=[
                                        element(
                                            "action",
                                            attrs=[
                                                (
                                                    A,
                                                    "name",
                                                    ("str", "cn.jpush.android.intent.NOTIFICATION_RECEIVED_PROXY"),
                                                )
                                            ],
                                        ),
                                        element(
                                            "action",
                                            attrs=[(A, "name", ("str", "com.google.android.c1dm.intent.RECEIVE"))],
                                        ),
                                        element(
                                            "action",
                                            attrs=[(A, "name", ("str", "org.agoo.android.intent.action.RECEIVE"))],
                                        ),
                                    ],
                                )
                            ],
                        )
                    ],
                )
            ],
        ),
    },
}


def main():
    out_dir = Path(__file__).resolve().parent / "axml"
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, spec in FIXTURES.items():
        binary = encode_axml(
            spec["root"],
            spec["nsmap"],
            utf8=spec.get("utf8", False),
            resource_map_ids=spec.get("resource_map_ids"),
            unknown_chunk=spec.get("unknown_chunk", False),
        )
        golden = render_canonical(spec["root"], spec["nsmap"])
        (out_dir / f"{name}.axml").write_bytes(binary)
        (out_dir / f"{name}.golden.txt").write_bytes(golden.encode("utf-8"))
        print(f"{name}: {len(binary)} bytes, golden {len(golden)} chars")

    # Truncation mid-chunk: cut the simple fixture inside its element stream.
    simple = (out_dir / "01_simple_utf16.axml").read_bytes()
    truncated = simple[: len(simple) - 20]
    (out_dir / "07_truncated.axml").write_bytes(truncated)
    print(f"07_truncated: {len(truncated)} bytes")


if __name__ == "__main__":
    main()
