def anti_alias(pixels):
    n = len(pixels)
    up = []
    i = 0
    while (i < n):
        up.append(pixels[i])
        if (i + 1 < n):
            up.append((pixels[i] + pixels[i + 1]) // 2)
        else:
            up.append(pixels[i])
        i = i + 1
    out = []
    m = len(up)
    j = 0
    while (j + 1 < m):
        out.append((up[j] + up[j + 1]) // 2)
        j = j + 2
    return out
