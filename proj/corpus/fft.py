def cos_t(x):
    pi = 3.141592653589793
    while (x > pi):
        x = x - 2.0 * pi
    while (x < -pi):
        x = x + 2.0 * pi
    total = 0.0
    term = 1.0
    k = 0
    while (k < 12):
        total = total + term
        term = -term * x * x / ((2.0 * k + 1.0) * (2.0 * k + 2.0))
        k = k + 1
    return total

def sin_t(x):
    pi = 3.141592653589793
    while (x > pi):
        x = x - 2.0 * pi
    while (x < -pi):
        x = x + 2.0 * pi
    total = 0.0
    term = x
    k = 0
    while (k < 12):
        total = total + term
        term = -term * x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0))
        k = k + 1
    return total

def fft_rec(re, im):
    n = len(re)
    if (n <= 1):
        return [re, im]
    even_re = []
    even_im = []
    odd_re = []
    odd_im = []
    i = 0
    while (i < n):
        if (i % 2 == 0):
            even_re.append(re[i])
            even_im.append(im[i])
        else:
            odd_re.append(re[i])
            odd_im.append(im[i])
        i = i + 1
    ev = fft_rec(even_re, even_im)
    od = fft_rec(odd_re, odd_im)
    out_re = []
    out_im = []
    k = 0
    while (k < n):
        out_re.append(0.0)
        out_im.append(0.0)
        k = k + 1
    half = n // 2
    k = 0
    while (k < half):
        ang = -2.0 * 3.141592653589793 * k / n
        wr = cos_t(ang)
        wi = sin_t(ang)
        tr = wr * od[0][k] - wi * od[1][k]
        ti = wr * od[1][k] + wi * od[0][k]
        out_re[k] = ev[0][k] + tr
        out_im[k] = ev[1][k] + ti
        out_re[k + half] = ev[0][k] - tr
        out_im[k + half] = ev[1][k] - ti
        k = k + 1
    return [out_re, out_im]

def fft(signal):
    re = []
    im = []
    for v in signal:
        re.append(v * 1.0)
        im.append(0.0)
    return fft_rec(re, im)
