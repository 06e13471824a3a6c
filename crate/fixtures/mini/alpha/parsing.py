def read_pair(line):
    key, value = line.split('=')
    return key.strip(), value.strip()
def first_field(row):
    return row.split(',')[0]
def port_of(addr):
    host, port = addr.rsplit(':', 1)
    return int(port)
def version_tuple(s):
    return tuple(int(p) for p in s.split('.'))
def shout(msg):
    return msg.upper() + '!'
def scale(x, factor):
    return x * factor
def label(name):
    return name.strip().lower()
