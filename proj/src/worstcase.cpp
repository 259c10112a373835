#include "lphs/worstcase.hpp"

#include <fftw3.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>

namespace lphs {

std::uint64_t BitString::window_bits(std::int64_t i, int k) const {
  if (k < 1 || k > 64) throw std::domain_error("BitString::window_bits: k must be in [1, 64]");
  i = wrap_index(i, n_);
  if (i + k <= n_) {
    const auto w = static_cast<std::size_t>(i >> 6);
    const int off = static_cast<int>(i & 63);
    std::uint64_t v = words_[w] >> off;
    if (off != 0 && off + k > 64) v |= words_[w + 1] << (64 - off);
    return k == 64 ? v : (v & ((std::uint64_t{1} << k) - 1));
  }
  std::uint64_t v = 0;
  for (int t = 0; t < k; ++t) v |= static_cast<std::uint64_t>(get(wrap_index(i + t, n_))) << t;
  return v;
}

std::int64_t BitString::popcount() const noexcept {
  std::int64_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

BitString BitString::read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  BitString x(static_cast<std::int64_t>(bytes.size()) * 8);
  for (std::size_t k = 0; k < bytes.size(); ++k)
    x.words_[k / 8] |= static_cast<std::uint64_t>(bytes[k]) << (8 * (k % 8));
  return x;
}

void BitString::write_file(const std::filesystem::path& p) const {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + p.string());
  const auto nbytes = static_cast<std::size_t>((n_ + 7) / 8);
  for (std::size_t k = 0; k < nbytes; ++k) out.put(static_cast<char>((words_[k / 8] >> (8 * (k % 8))) & 0xff));
}

std::vector<std::int64_t> cyclic_shift_distances(const BitString& x) {
  const std::int64_t n = x.size();
  std::vector<std::int64_t> dist(static_cast<std::size_t>(n), 0);
  const auto& w = x.words();
  const std::int64_t full = n / 64;
  const int tail = static_cast<int>(n % 64);
  for (std::int64_t i = 1; i < n; ++i) {
    std::int64_t c = 0;
    for (std::int64_t k = 0; k < full; ++k) c += std::popcount(w[static_cast<std::size_t>(k)] ^ x.window_bits(i + 64 * k, 64));
    if (tail) {
      const std::uint64_t mask = (std::uint64_t{1} << tail) - 1;
      c += std::popcount((w[static_cast<std::size_t>(full)] ^ x.window_bits(i + 64 * full, tail)) & mask);
    }
    dist[static_cast<std::size_t>(i)] = c;
  }
  return dist;
}

namespace {
std::mutex fftw_planner_mutex;  // the FFTW planner is not reentrant
}

std::vector<std::int64_t> cyclic_shift_distances_fft(const BitString& x) {
  const std::int64_t n = x.size();
  const std::int64_t m = n / 2 + 1;
  double* in = fftw_alloc_real(static_cast<std::size_t>(n));
  fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(m));
  fftw_plan fwd, inv;
  {
    std::lock_guard lock(fftw_planner_mutex);
    fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, spec, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, in, FFTW_ESTIMATE);
  }
  for (std::int64_t i = 0; i < n; ++i) in[i] = x.get(i) ? -1.0 : 1.0;
  fftw_execute(fwd);
  for (std::int64_t k = 0; k < m; ++k) {
    spec[k][0] = spec[k][0] * spec[k][0] + spec[k][1] * spec[k][1];
    spec[k][1] = 0.0;
  }
  fftw_execute(inv);
  std::vector<std::int64_t> dist(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const auto corr = std::llround(in[i] / static_cast<double>(n));
    dist[static_cast<std::size_t>(i)] = (n - corr) / 2;
  }
  {
    std::lock_guard lock(fftw_planner_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(inv);
  }
  fftw_free(in);
  fftw_free(spec);
  return dist;
}

GoodnessReport check_goodness_cyclic(const BitString& x, double alpha) {
  const std::int64_t n = x.size();
  GoodnessReport rep;
  if (n < 2) {
    rep.is_good = true;
    rep.min_relative_distance = 1.0;
    return rep;
  }
  const auto dist = n <= (std::int64_t{1} << 16) ? cyclic_shift_distances(x) : cyclic_shift_distances_fft(x);
  const auto it = std::min_element(dist.begin() + 1, dist.end());
  rep.worst_i = it - dist.begin();
  rep.min_relative_distance = static_cast<double>(*it) / static_cast<double>(n);
  rep.is_good = rep.min_relative_distance >= alpha;
  return rep;
}

namespace {

void check_window(const BitString& x, std::int64_t W) {
  if (W < 1 || W > x.size()) throw std::domain_error("check_goodness_windowed: W must be in [1, n]");
}

GoodnessReport finish(GoodnessReport rep, double alpha) {
  rep.is_good = rep.min_relative_distance >= alpha;
  return rep;
}

}  // namespace

GoodnessReport check_goodness_windowed(const BitString& x, double alpha, std::int64_t W) {
  check_window(x, W);
  const std::int64_t n = x.size();
  const std::int64_t last = n - (W + 1) / 2;  // largest admissible window start
  GoodnessReport rep;
  rep.min_relative_distance = 1.0;
  std::vector<std::int64_t> pre(static_cast<std::size_t>(n) + 1);
  for (std::int64_t delta = 1; delta <= last; ++delta) {
    pre[0] = 0;
    for (std::int64_t j = 0; j + delta < n; ++j)
      pre[static_cast<std::size_t>(j) + 1] = pre[static_cast<std::size_t>(j)] + (x.get(j) != x.get(j + delta));
    for (std::int64_t i = 0; i + delta <= last; ++i) {
      const std::int64_t len = std::min(W, n - i - delta);
      const auto diff = pre[static_cast<std::size_t>(i + len)] - pre[static_cast<std::size_t>(i)];
      const double rel = static_cast<double>(diff) / static_cast<double>(len);
      if (rel < rep.min_relative_distance) {
        rep.min_relative_distance = rel;
        rep.worst_i = i;
        rep.worst_i2 = i + delta;
      }
    }
  }
  return finish(rep, alpha);
}

GoodnessReport check_goodness_windowed_naive(const BitString& x, double alpha, std::int64_t W) {
  check_window(x, W);
  const std::int64_t n = x.size();
  const std::int64_t last = n - (W + 1) / 2;
  GoodnessReport rep;
  rep.min_relative_distance = 1.0;
  for (std::int64_t i = 0; i <= last; ++i)
    for (std::int64_t i2 = i + 1; i2 <= last; ++i2) {
      const std::int64_t len = std::min(W, n - i2);
      std::int64_t diff = 0;
      for (std::int64_t t = 0; t < len; ++t) diff += x.get(i + t) != x.get(i2 + t);
      const double rel = static_cast<double>(diff) / static_cast<double>(len);
      if (rel < rep.min_relative_distance) {
        rep.min_relative_distance = rel;
        rep.worst_i = i;
        rep.worst_i2 = i2;
      }
    }
  return finish(rep, alpha);
}

BitString uniform_bits(const Seed& seed, std::int64_t n) {
  BitString x(n);
  HashRng rng(seed);
  for (std::int64_t i = 0; i < n; i += 64) {
    const std::uint64_t w = rng();
    for (std::int64_t t = 0; t < 64 && i + t < n; ++t) x.set(i + t, (w >> t) & 1U);
  }
  return x;
}

BitString biased_bits(const Seed& seed, std::int64_t n, double beta) {
  BitString x(n);
  HashRng rng(seed);
  for (std::int64_t i = 0; i < n; ++i) x.set(i, rng.uniform() < beta);
  return x;
}

std::uint64_t lfsr_primitive_taps(int degree) {
  auto mask = [](std::initializer_list<int> taps) {
    std::uint64_t m = 0;
    for (int t : taps) m |= std::uint64_t{1} << (t - 1);
    return m;
  };
  switch (degree) {
    case 8: return mask({8, 6, 5, 4});
    case 10: return mask({10, 7});
    case 12: return mask({12, 6, 4, 1});
    case 16: return mask({16, 15, 13, 4});
    case 20: return mask({20, 17});
    case 21: return mask({21, 19});
    case 22: return mask({22, 21});
    default: throw std::domain_error("lfsr_primitive_taps: unsupported degree");
  }
}

BitString lfsr_bits(int degree, std::uint64_t taps, std::int64_t n, std::uint64_t state) {
  if (degree < 2 || degree > 63) throw std::domain_error("lfsr_bits: degree must be in [2, 63]");
  const std::uint64_t full = (std::uint64_t{1} << degree) - 1;
  state &= full;
  if (state == 0) throw std::domain_error("lfsr_bits: zero state");
  BitString x(n);
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint64_t fb = static_cast<std::uint64_t>(std::popcount(state & taps) & 1);
    x.set(i, fb);
    state = ((state << 1) | fb) & full;
  }
  return x;
}

BitString markov_bits(const Seed& seed, std::int64_t n, double stay) {
  BitString x(n);
  HashRng rng(seed);
  bool cur = rng.uniform() < 0.5;
  for (std::int64_t i = 0; i < n; ++i) {
    if (i > 0 && rng.uniform() >= stay) cur = !cur;
    x.set(i, cur);
  }
  return x;
}

BitString noncyclic_shift(const BitString& z, std::int64_t r, const Seed& fresh) {
  const std::int64_t n = z.size();
  if (r < 0 || r > n) throw std::domain_error("noncyclic_shift: shift out of range");
  BitString y(n);
  for (std::int64_t i = 0; i + r < n; ++i) y.set(i, z.get(i + r));
  const auto tail = uniform_bits(fresh, r);
  for (std::int64_t t = 0; t < r; ++t) y.set(n - r + t, tail.get(t));
  return y;
}

BitString cyclic_shift(const BitString& z, std::int64_t r) {
  const std::int64_t n = z.size();
  BitString y(n);
  for (std::int64_t i = 0; i < n; ++i) y.set(i, z.get(wrap_index(i + r, n)));
  return y;
}

std::int64_t default_tile_bits(std::int64_t n) {
  const auto lg = static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(std::max<std::int64_t>(n, 2) - 1)));
  return lg * lg;
}

std::int64_t default_tile_window(std::int64_t n) { return 4 * default_tile_bits(n); }

TilingKey TilingKey::sample(const Seed& seed, std::int64_t universe, std::int64_t b_tile) {
  return TilingKey{random_subset(seed.with_stream(1), universe, b_tile), seed.with_stream(2)};
}

TiledView::TiledView(const BitString& x, const TilingKey& key, int gamma_bits, Mode mode)
    : x_(&x), key_(&key), gamma_(key.gamma_seed), gamma_bits_(gamma_bits), mode_(mode) {
  if (gamma_bits < 1 || gamma_bits > 64) throw std::domain_error("TiledView: gamma width must be in [1, 64]");
  if (key.b_tile() > 128) throw std::domain_error("TiledView: at most 128 tile offsets");
}

TiledView::Tile TiledView::tile(std::int64_t i) const {
  const std::int64_t n = x_->size();
  const auto& S = key_->S;
  Tile t;
  if (mode_ == Mode::noncyclic) {
    if (i < 0 || (!S.empty() && i + S.back() >= n)) throw std::domain_error("TiledView: tile out of range");
    for (std::size_t k = 0; k < S.size(); ++k) {
      const std::uint64_t bit = x_->get(i + S[k]) ? 1 : 0;
      if (k < 64) t.lo |= bit << k;
      else t.hi |= bit << (k - 64);
    }
    return t;
  }
  const std::int64_t base = wrap_index(i, n);
  for (std::size_t k = 0; k < S.size(); ++k) {
    std::int64_t p = base + S[k];
    if (p >= n) p -= n;
    const std::uint64_t bit = x_->get(p) ? 1 : 0;
    if (k < 64) t.lo |= bit << k;
    else t.hi |= bit << (k - 64);
  }
  return t;
}

std::int64_t count_tile_collisions(const BitString& x, const TilingKey& key) {
  const TiledView view(x, key, 64, Mode::cyclic);
  std::vector<TiledView::Tile> tiles(static_cast<std::size_t>(x.size()));
  for (std::int64_t i = 0; i < x.size(); ++i) tiles[static_cast<std::size_t>(i)] = view.tile(i);
  std::sort(tiles.begin(), tiles.end());
  std::int64_t pairs = 0, run = 1;
  for (std::size_t k = 1; k <= tiles.size(); ++k) {
    if (k < tiles.size() && tiles[k] == tiles[k - 1]) {
      ++run;
    } else {
      pairs += run * (run - 1) / 2;
      run = 1;
    }
  }
  return pairs;
}

}  // namespace lphs
