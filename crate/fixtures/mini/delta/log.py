import re
def parse_range(spec):
    m = re.match(r'(\d+)-(\d+)', spec)
    if m is None:
        raise ValueError(spec)
    lo, hi = m.groups()
    return int(lo), int(hi)
def level_of(record):
    try:
        return record.split(':')[0]
    except IndexError:
        return 'INFO'
def tail(text):
    return text.splitlines()[-1]
def words(line):
    parts = line.split()
    first, *rest = parts
    return first
