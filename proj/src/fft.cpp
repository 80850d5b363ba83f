#include "mtffm/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace mtffm::fft {
namespace {

// fftw_plan creation is not thread safe and is far more expensive than the
// transform itself at the sizes used here, so plans are built once per
// (size, direction) pair and reused.  Plans are created with FFTW_ESTIMATE
// and the array-execute interface, which permits execution on buffers other
// than the ones used at planning time as long as alignment matches.
class PlanCache {
public:
    void execute(int sign, std::span<const std::complex<double>> in,
                 std::vector<std::complex<double>>& out)
    {
        const std::size_t n = in.size();
        out.resize(n);
        if (n == 0) return;

        std::scoped_lock lock(mutex_);
        const auto key = std::make_pair(n, sign);
        auto it = plans_.find(key);
        if (it == plans_.end()) {
            fftw_complex* buf = fftw_alloc_complex(n);
            if (!buf) throw std::runtime_error("fft: allocation failure");
            fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf,
                                              sign, FFTW_ESTIMATE);
            if (!plan) {
                fftw_free(buf);
                throw std::runtime_error("fft: planner failure");
            }
            it = plans_.emplace(key, Entry{plan, buf}).first;
        }

        fftw_complex* buf = it->second.buffer;
        for (std::size_t i = 0; i < n; ++i) {
            buf[i][0] = in[i].real();
            buf[i][1] = in[i].imag();
        }
        fftw_execute(it->second.plan);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = {buf[i][0], buf[i][1]};
    }

    ~PlanCache()
    {
        for (auto& [key, entry] : plans_) {
            fftw_destroy_plan(entry.plan);
            fftw_free(entry.buffer);
        }
    }

private:
    struct Entry {
        fftw_plan plan;
        fftw_complex* buffer;
    };
    std::map<std::pair<std::size_t, int>, Entry> plans_;
    std::mutex mutex_;
};

PlanCache& cache()
{
    static PlanCache instance;
    return instance;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> x)
{
    std::vector<std::complex<double>> out;
    cache().execute(FFTW_FORWARD, x, out);
    return out;
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> x)
{
    std::vector<std::complex<double>> out;
    cache().execute(FFTW_BACKWARD, x, out);
    const double scale = x.empty() ? 1.0 : 1.0 / static_cast<double>(x.size());
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace mtffm::fft
