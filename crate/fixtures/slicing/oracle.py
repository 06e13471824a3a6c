import os
import re


def straight(s):
    t = s.strip()
    u = t.lower()
    n = int(u)
    return n


def redefine(s):
    t = s.strip()
    t = 'fixed'
    u = t + s
    return u.split(',')


def branch_merge(s, flag):
    if flag:
        t = s.strip()
    else:
        t = s.lower()
    parts = t.split(':')
    return parts[0]


def elif_chain(line):
    head = line[:2]
    if head == 'ab':
        kind = 1
    elif head == 'cd':
        kind = 2
    else:
        kind = 3
    rest = line[2:]
    return kind, rest


def accumulate(text):
    out = ''
    for ch in text.split(','):
        out = out + ch.strip()
    return out[0]


def while_loop(s):
    i = 0
    cur = s
    while cur:
        cur = cur[1:]
        i += 1
    return i


def nested_loops(blob):
    total = 0
    for line in blob.splitlines():
        for field in line.split(' '):
            if field.isdigit():
                total += int(field)
    return total


def tuple_unpack(pair):
    key, value = pair.split('=')
    key = key.strip()
    return {key: value}


def partial_def(s):
    parts = s.split(',')
    parts[0] = 'x'
    first = parts[0]
    return first.upper()


def aug_assign(s):
    t = s.strip()
    t += '!'
    t += s[0]
    return t


def terminal_int(s):
    n = int(s)
    m = n + 1
    k = str(m)
    return k


def early_return(s, limit):
    if len(s) > limit:
        return s[:limit]
    t = s.strip()
    return t


def fstring_flow(name):
    label = f'<{name}>'
    width = len(label)
    padded = label.center(width + 2)
    return padded[1:]


def method_chain(raw):
    clean = raw.strip().lower().replace('-', '_')
    first, _, rest = clean.partition('_')
    return first, rest


def two_params(a, b):
    x = a.split(',')
    y = b.split(';')
    z = x[0] + y[0]
    return z


def env_flow():
    value = os.environ['HOME']
    parts = value.split('/')
    last = parts[-1]
    return last


def regex_flow(s):
    m = re.match('([a-z]+)=(\\d+)', s)
    if m:
        key = m.group(1)
        num = int(m.group(2))
        return key, num
    return None


def comprehension(spec):
    items = [p.strip() for p in spec.split(',') if p]
    firsts = [i[0] for i in items]
    return ''.join(firsts)


def while_counter(s):
    pos = 0
    buf = s
    while pos < len(buf):
        if buf[pos] == ' ':
            buf = buf[:pos] + buf[pos + 1:]
        pos += 1
    return buf


def loop_kill(lines):
    last = ''
    for line in lines.splitlines():
        last = line
        if last.startswith('#'):
            last = ''
    return last.split('=')


def attr_target(obj, s):
    obj.name = s.strip()
    alias = obj.name
    return alias[0]


def global_read(s):
    t = s + SUFFIX
    u = t.upper()
    return u[-1]


def list_build(s):
    acc = []
    for word in s.split():
        acc.append(word.title())
    joined = ' '.join(acc)
    return joined[0]


def ternary(s, strict):
    t = s.strip() if strict else s
    n = len(t)
    head = t[:n // 2]
    return head


def chained_defs(s):
    a = s.strip()
    b = a[1:]
    c = b[1:]
    d = c[1:]
    e = d.split('.')
    return e[0], a


def loop_carried(s):
    prev = ''
    out = []
    for ch in s:
        if ch == prev:
            out.append(ch)
        prev = ch
    return out
