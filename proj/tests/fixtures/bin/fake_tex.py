"""Stand-in for pdflatex and bibtex.

  fake_tex.py pdflatex <file.tex>   writes <file>.pdf with the section text
  fake_tex.py bibtex <stem>         writes <stem>.bbl

A line containing \\brokenmacro makes pdflatex fail with a TeX-style error.
"""
import os
import re
import sys
import zlib


def escape(s):
    return s.replace("\\", "\\\\").replace("(", "\\(").replace(")", "\\)")


def plain_lines(tex):
    out = []
    for line in tex.splitlines():
        m = re.match(r"\\section\{(.*)\}", line)
        if m:
            out.append(m.group(1))
            continue
        if line.startswith("%") or line.startswith("\\"):
            continue
        line = re.sub(r"~?\\cite[a-z]*\{[^}]*\}", "", line)
        line = re.sub(r"\\[A-Za-z]+\*?(\[[^\]]*\])?(\{[^}]*\})?", "", line)
        line = line.replace("{", "").replace("}", "").strip()
        if line:
            out.append(line)
    return out


def write_pdf(path, lines, per_page=40):
    pages = [lines[i:i + per_page] for i in range(0, max(len(lines), 1), per_page)] or [[]]
    objects = []

    def add(body):
        objects.append(body)
        return len(objects)

    catalog = add(None)
    tree = add(None)
    font = add(b"<< /Type /Font /Subtype /Type1 /BaseFont /Helvetica >>")
    kids = []
    for page in pages:
        ops = ["BT", "/F1 10 Tf", "72 720 Td", "12 TL"]
        for line in page:
            ops.append("(" + escape(line.encode("latin-1", "replace").decode("latin-1")) + ") Tj T*")
        ops.append("ET")
        data = zlib.compress("\n".join(ops).encode("latin-1", "replace"))
        content = add(b"<< /Length %d /Filter /FlateDecode >>\nstream\n" % len(data) + data + b"\nendstream")
        kids.append(add(b"<< /Type /Page /Parent %d 0 R /Contents %d 0 R >>" % (tree, content)))
    objects[catalog - 1] = b"<< /Type /Catalog /Pages %d 0 R >>" % tree
    objects[tree - 1] = (b"<< /Type /Pages /Kids [" + b" ".join(b"%d 0 R" % k for k in kids) +
                         b"] /Count %d /Resources << /Font << /F1 %d 0 R >> >> >>" % (len(kids), font))
    out = bytearray(b"%PDF-1.4\n")
    offsets = []
    for i, body in enumerate(objects, 1):
        offsets.append(len(out))
        out += b"%d 0 obj\n" % i + body + b"\nendobj\n"
    xref = len(out)
    out += b"xref\n0 %d\n0000000000 65535 f \n" % (len(objects) + 1)
    for off in offsets:
        out += b"%010d 00000 n \n" % off
    out += b"trailer\n<< /Size %d /Root %d 0 R >>\nstartxref\n%d\n%%%%EOF\n" % (len(objects) + 1, catalog, xref)
    with open(path, "wb") as f:
        f.write(bytes(out))


def main():
    if len(sys.argv) < 3:
        print("usage: fake_tex.py pdflatex|bibtex <file>", file=sys.stderr)
        return 2
    tool, target = sys.argv[1], sys.argv[-1]
    if tool == "bibtex":
        open(target + ".bbl", "w").close()
        return 0
    with open(target) as f:
        tex = f.read()
    for n, line in enumerate(tex.splitlines(), 1):
        if "\\brokenmacro" in line:
            print("! Undefined control sequence.")
            print("l.%d %s" % (n, line.strip()))
            return 1
    write_pdf(os.path.splitext(target)[0] + ".pdf", plain_lines(tex))
    print("Output written on %s." % (os.path.splitext(target)[0] + ".pdf"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
