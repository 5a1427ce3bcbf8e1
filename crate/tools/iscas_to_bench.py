#!/usr/bin/env python3
"""Convert gate-level ISCAS85 Verilog into the AND/OR/MAJ3/NOT bench dialect.

Multi-input gates become balanced trees of 2-input AND/OR gates, NAND/NOR
become AND/OR plus NOT, XOR/XNOR become OR(AND(a,~b),AND(~a,b)).  Also
emits a generated 8x8 array multiplier (mult8) built from MAJ3 carries.

usage: iscas_to_bench.py <netlist dir> <out dir>
"""
import os
import re
import sys

CIRCUITS = ["c432", "c499", "c880", "c1355", "c1908", "c2670", "c3540", "c5315", "c6288"]
GATES = {"and", "nand", "or", "nor", "xor", "xnor", "not", "buf"}


class Writer:
    def __init__(self):
        self.lines = []
        self.used = set()
        self.counter = 0

    def fresh(self, base):
        while True:
            self.counter += 1
            name = f"{base}_t{self.counter}"
            if name not in self.used:
                self.used.add(name)
                return name

    def emit(self, out, op, args):
        self.used.add(out)
        self.lines.append(f"{out} = {op}({','.join(args)})")

    def tree(self, out, op, args):
        """Balanced tree of 2-input `op` whose root is named `out`."""
        if len(args) == 1:
            self.emit(out, "BUF", args)
            return
        level = list(args)
        while len(level) > 2:
            nxt = []
            for i in range(0, len(level) - 1, 2):
                t = self.fresh(out)
                self.emit(t, op, [level[i], level[i + 1]])
                nxt.append(t)
            if len(level) % 2:
                nxt.append(level[-1])
            level = nxt
        self.emit(out, op, level)

    def inv(self, sig):
        t = self.fresh(sig)
        self.emit(t, "NOT", [sig])
        return t

    def xor2(self, out, a, b):
        na, nb = self.inv(a), self.inv(b)
        t1, t2 = self.fresh(out), self.fresh(out)
        self.emit(t1, "AND", [a, nb])
        self.emit(t2, "AND", [na, b])
        self.emit(out, "OR", [t1, t2])


def parse_verilog(text):
    text = re.sub(r"//.*", "", text)
    body = text[text.index(";") + 1:text.rindex("endmodule")]
    inputs, outputs, gates, assigns = [], [], [], []
    for stmt in body.split(";"):
        stmt = " ".join(stmt.split())
        if not stmt:
            continue
        word = stmt.split()[0]
        if word in ("input", "output"):
            names = [n.strip() for n in stmt[len(word):].split(",") if n.strip()]
            (inputs if word == "input" else outputs).extend(names)
        elif word == "wire":
            continue
        elif word == "assign":
            lhs, rhs = stmt[len("assign"):].split("=")
            assigns.append((lhs.strip(), rhs.strip()))
        elif word in GATES:
            pins = [p.strip() for p in stmt[stmt.index("(") + 1:stmt.rindex(")")].split(",")]
            gates.append((word, pins[0], pins[1:]))
        else:
            raise ValueError(f"unsupported statement: {stmt}")
    return inputs, outputs, gates, assigns


def convert(text):
    inputs, outputs, gates, assigns = parse_verilog(text)
    alias = {}
    const = {}
    for lhs, rhs in assigns:
        if rhs in ("1'b0", "1'b1"):
            const[lhs] = rhs == "1'b1"
        else:
            alias[lhs] = rhs
    for op, out, ins in gates:
        if op == "buf":
            alias[out] = ins[0]

    def resolve(s):
        while s in alias:
            s = alias[s]
        return s

    # constant propagation through AND/OR-family gates
    defs = {out: (op, [resolve(i) for i in ins]) for op, out, ins in gates if op != "buf"}
    changed = True
    while changed:
        changed = False
        for out, (op, ins) in list(defs.items()):
            vals = [const.get(i) for i in ins]
            if all(v is None for v in vals):
                continue
            base = op.lstrip("n") if op not in ("not",) else op
            neg = op in ("nand", "nor", "xnor", "not")
            live = [i for i, v in zip(ins, vals) if v is None]
            cv = [v for v in vals if v is not None]
            if base == "not":
                const[out] = not cv[0]
            elif base == "and" and not all(cv):
                const[out] = neg
            elif base == "or" and any(cv):
                const[out] = not neg
            elif base in ("and", "or") and live:
                defs[out] = (op, live)
                continue
            elif base in ("and", "or"):
                const[out] = (all(cv) if base == "and" else any(cv)) != neg
            else:
                raise ValueError(f"constant into {op}")
            del defs[out]
            changed = True

    w = Writer()
    for s in inputs:
        w.used.add(s)
    lines_io = [f"INPUT({s})" for s in inputs]
    for s in outputs:
        d = resolve(s)
        if d in const:
            continue
        lines_io.append(f"OUTPUT({s})" if d == s else f"OUTPUT({s}) = {d}")
    for out in defs:
        w.used.add(out)
    for out, (op, ins) in defs.items():
        if op == "not":
            w.emit(out, "NOT", ins)
        elif op in ("and", "or"):
            w.tree(out, op.upper(), ins)
        elif op in ("nand", "nor"):
            t = w.fresh(out)
            w.tree(t, op[1:].upper(), ins)
            w.emit(out, "NOT", [t])
        elif op in ("xor", "xnor"):
            acc = ins[0]
            for k, b in enumerate(ins[1:]):
                last = k == len(ins) - 2
                tgt = out if last and op == "xor" else w.fresh(out)
                w.xor2(tgt, acc, b)
                acc = tgt
            if op == "xnor":
                w.emit(out, "NOT", [acc])
        else:
            raise ValueError(op)
    return lines_io + w.lines


def mult8():
    w = Writer()
    n = 8
    lines = [f"INPUT(a{i})" for i in range(n)] + [f"INPUT(b{i})" for i in range(n)]
    pp = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            pp[i][j] = f"pp{i}_{j}"
            w.emit(pp[i][j], "AND", [f"a{j}", f"b{i}"])
    outs = []

    def full_add(tag, a, b, c):
        s1 = w.fresh(tag)
        w.xor2(s1, a, b)
        s = f"s{tag}"
        w.xor2(s, s1, c)
        co = f"c{tag}"
        w.emit(co, "MAJ3", [a, b, c])
        return s, co

    def half_add(tag, a, b):
        s = f"s{tag}"
        w.xor2(s, a, b)
        co = f"c{tag}"
        w.emit(co, "AND", [a, b])
        return s, co

    # row-by-row carry-save accumulation
    acc = [pp[0][j] for j in range(n)]
    carries = [None] * n
    outs.append(acc[0])
    for i in range(1, n):
        new_acc, new_car = [], []
        for j in range(n):
            a = pp[i][j]
            b = acc[j + 1] if j + 1 < n else None
            c = carries[j] if i > 1 else None
            tag = f"{i}_{j}"
            if b is None and c is None:
                s, co = a, None
            elif c is None:
                s, co = half_add(tag, a, b)
            elif b is None:
                s, co = half_add(tag, a, c)
            else:
                s, co = full_add(tag, a, b, c)
            new_acc.append(s)
            new_car.append(co)
        acc, carries = new_acc, new_car
        outs.append(acc[0])
    # final ripple adder
    carry = None
    for j in range(1, n):
        a, b = acc[j], carries[j - 1]
        tag = f"r{j}"
        if carry is None:
            s, carry = half_add(tag, a, b)
        else:
            s, carry = full_add(tag, a, b, carry)
        outs.append(s)
    tail = f"m{2 * n - 1}"
    w.emit(tail, "OR", [carry, carries[n - 1]] if carries[n - 1] else [carry, carry])
    outs.append(tail)
    for k, o in enumerate(outs):
        lines.append(f"OUTPUT(m{k}) = {o}" if o != f"m{k}" else f"OUTPUT({o})")
    return lines + w.lines


def main():
    src, dst = sys.argv[1], sys.argv[2]
    os.makedirs(dst, exist_ok=True)
    for name in CIRCUITS:
        with open(os.path.join(src, f"{name}.v")) as f:
            lines = convert(f.read())
        with open(os.path.join(dst, f"{name}.bench"), "w") as f:
            f.write(f"# {name} (ISCAS85, decomposed to AND/OR/NOT)\n")
            f.write("\n".join(lines) + "\n")
    with open(os.path.join(dst, "mult8.bench"), "w") as f:
        f.write("# mult8 (8x8 array multiplier, MAJ3 carries)\n")
        f.write("\n".join(mult8()) + "\n")


if __name__ == "__main__":
    main()
