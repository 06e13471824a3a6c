def straight(s):
    parts = s.split(',')
    return int(parts[0])


def one_if(s):
    t = s.strip()
    if t.startswith('#'):
        return None
    return t[1:]


def if_elif_else(s):
    key = s.strip()
    if key == 'a':
        n = 1
    elif key == 'b':
        n = 2
    elif key.startswith('c'):
        n = 3
    else:
        n = int(key)
    return n


def bool_ops(s):
    t = s.strip()
    if t and t[0] == '-' or t.endswith('!'):
        return t[1:]
    return t


def comprehension_filter(spec):
    items = [p.strip() for p in spec.split(',') if p if not p.startswith('#')]
    return [int(i) for i in items if i.isdigit()]


def handlers(s):
    try:
        n = int(s.strip())
    except ValueError:
        n = -1
    except (TypeError, OverflowError):
        n = -2
    return n


def loop_with_if(text):
    out = []
    for line in text.splitlines():
        if line.startswith('#'):
            continue
        out.append(line.split('=')[0])
    return out


def while_and_ternary(s):
    buf = s.strip()
    while buf.startswith(' ') and len(buf) > 1:
        buf = buf[1:]
    head = buf[0] if buf else ''
    return head


def nested(s):
    fields = s.split(';')
    for f in fields:
        if ':' in f:
            k, v = f.split(':')
            if k == 'x' or k == 'y':
                return int(v)
    return 0


def mixed(s):
    t = s.strip()
    try:
        if t.isdigit() and len(t) < 4:
            return int(t)
        return [c for c in t if c.isalpha()][0]
    except IndexError:
        return None
