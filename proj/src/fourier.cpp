#include "swnet/fourier.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace swnet::detail {
namespace {

class PlanCache {
public:
    ~PlanCache()
    {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int n, int sign)
    {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        // FFTW_ESTIMATE never touches the buffers, so a scratch array is fine.
        std::vector<cplx> scratch(static_cast<std::size_t>(n));
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (plan == nullptr) throw std::runtime_error("fftw: plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache()
{
    static PlanCache cache;
    return cache;
}

} // namespace

void fft_unnormalized(std::span<cplx> data, int sign)
{
    if (data.size() < 2) return;
    fftw_plan plan = plan_cache().get(static_cast<int>(data.size()), sign);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

} // namespace swnet::detail
