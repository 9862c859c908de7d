def walk(t, subst):
    while (t[0] == "v"):
        bound = subst.get(t[1], 0)
        if (bound == 0):
            return t
        t = bound
    return t

def occurs(name, t, subst):
    t = walk(t, subst)
    if (t[0] == "v"):
        return t[1] == name
    found = False
    for arg in t[2]:
        if (occurs(name, arg, subst)):
            found = True
    return found

def unify(t1, t2, subst):
    a = walk(t1, subst)
    b = walk(t2, subst)
    if (a[0] == "v"):
        if (b[0] == "v"):
            if (a[1] == b[1]):
                return subst
        if (occurs(a[1], b, subst)):
            return 0
        subst[a[1]] = b
        return subst
    if (b[0] == "v"):
        return unify(b, a, subst)
    if (a[1] != b[1]):
        return 0
    if (len(a[2]) != len(b[2])):
        return 0
    result = subst
    i = 0
    while (i < len(a[2])):
        if (result != 0):
            result = unify(a[2][i], b[2][i], result)
        i = i + 1
    return result

def mgu(t1, t2):
    subst = {}
    return unify(t1, t2, subst)
