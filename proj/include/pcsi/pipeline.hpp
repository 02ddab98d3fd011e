#pragma once

// Sender and receiver glue: build a transmission plan, cut an image into
// payloads, and fold received payloads back into sample maps ready for
// reconstruction.  Sender and receiver never exchange a plan; everything
// a receiver needs is in each payload header plus its length.

#include <cstdint>
#include <map>

#include "image_model.hpp"
#include "pdp_codec.hpp"
#include "pixel_sequence.hpp"
#include "reconstruction.hpp"

namespace pcsi {

// Largest packet that fits `pdp_len`, aiming at `color_fraction` of its
// pixels carrying chroma.  Grey pixels then soak up every remaining
// field, which keeps the padding short enough to stay decodable.
inline TransmissionPlan fill_plan(int pdp_len, ColorDepth depth, int rows, int cols,
                                  double color_fraction = 0.25) {
    if (pdp_len < 8 || pdp_len > static_cast<int>(pdp_max_len))
        throw std::invalid_argument("pdp length must be 8..256");
    if (!(color_fraction >= 0.0 && color_fraction <= 1.0))
        throw std::invalid_argument("color fraction must be in [0, 1]");
    const int b = depth.bits();
    const std::size_t capacity = 8 * (static_cast<std::size_t>(pdp_len) - pdp_header_size);
    const std::size_t fields = capacity / b;
    std::size_t n_color = static_cast<std::size_t>(
        fields * color_fraction / (1.0 + 2.0 * color_fraction));
    n_color = std::min({n_color, std::size_t{255}, fields / 3});
    const std::size_t n_grey = (capacity - 3 * b * n_color) / b;

    TransmissionPlan plan;
    plan.n_color = static_cast<std::uint32_t>(n_color);
    plan.n_grey = static_cast<std::uint32_t>(n_grey);
    plan.depth = depth;
    plan.pdp_len = static_cast<std::uint16_t>(
        pdp_header_size + (plan.payload_bits() + 7) / 8);
    plan.rows = static_cast<std::uint16_t>(rows);
    plan.cols = static_cast<std::uint16_t>(cols);
    validate_plan(plan);
    return plan;
}

// Plan from explicit pixel counts; the payload length follows from them.
inline TransmissionPlan plan_from_counts(int n_color, int n_grey, ColorDepth depth,
                                         int rows, int cols) {
    if (n_color < 0 || n_grey < 0) throw std::invalid_argument("negative pixel count");
    TransmissionPlan plan;
    plan.n_color = static_cast<std::uint32_t>(n_color);
    plan.n_grey = static_cast<std::uint32_t>(n_grey);
    plan.depth = depth;
    plan.pdp_len = static_cast<std::uint16_t>(
        pdp_header_size + (plan.payload_bits() + 7) / 8);
    plan.rows = static_cast<std::uint16_t>(rows);
    plan.cols = static_cast<std::uint16_t>(cols);
    validate_plan(plan);
    return plan;
}

inline PdpHeader make_pdp_header(const TransmissionPlan& plan, std::uint8_t image_id,
                                 std::uint16_t packet_id) {
    PdpHeader header;
    header.image_id = image_id;
    header.rows16 = static_cast<std::uint8_t>(plan.rows / 16);
    header.cols16 = static_cast<std::uint8_t>(plan.cols / 16);
    header.packet_id = packet_id;
    header.n_color = static_cast<std::uint8_t>(plan.n_color);
    header.depth_code = plan.depth.code();
    return header;
}

// Payloads for `count` consecutive packet ids.  Ids wrap at 65536, which
// restarts the pixel sequence; retransmitting a pass is how a beacon
// keeps filling in whatever the channel dropped last time.
inline std::vector<Bytes> encode_image_packets(const Image& image,
                                               const TransmissionPlan& plan,
                                               std::uint8_t image_id,
                                               std::uint32_t first_packet = 0,
                                               std::uint32_t count = 0) {
    if (plan.rows != image.height() || plan.cols != image.width())
        throw std::invalid_argument("plan does not match image dimensions");
    validate_plan(plan);
    if (count == 0) count = plan.packets_per_pass();

    const PixelPermutation perm = build_permutation(plan.rows, plan.cols);
    std::vector<Bytes> packets;
    packets.reserve(count);
    std::vector<YcbcrPixel> color(plan.n_color);
    std::vector<std::uint8_t> grey(plan.n_grey);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint16_t pid = static_cast<std::uint16_t>((first_packet + i) & 0xFFFF);
        const PacketPixels slice = packet_slice(perm, plan, pid);
        for (std::size_t s = 0; s < slice.color.size(); ++s) {
            const RowCol rc = linear_to_rowcol(slice.color[s], plan.rows, plan.cols);
            const YcbcrPixel px = rgb_to_ycbcr(image.get(rc.row, rc.col));
            color[s] = {quantize_channel(px.y, plan.depth),
                        quantize_channel(px.cb, plan.depth),
                        quantize_channel(px.cr, plan.depth)};
        }
        for (std::size_t s = 0; s < slice.grey.size(); ++s) {
            const RowCol rc = linear_to_rowcol(slice.grey[s], plan.rows, plan.cols);
            const YcbcrPixel px = rgb_to_ycbcr(image.get(rc.row, rc.col));
            grey[s] = quantize_channel(px.y, plan.depth);
        }
        packets.push_back(encode_pdp(make_pdp_header(plan, image_id, pid), color, grey));
    }
    return packets;
}

enum class AddOutcome { accepted, replaced, wrong_image, geometry_mismatch };

// Receive-side sample store for one image id.  The first accepted payload
// pins the geometry; later payloads must agree with it.  A duplicate
// packet id simply overwrites its samples, so the newest copy wins.
class PacketAccumulator {
public:
    AddOutcome add(const PdpPayload& payload) {
        const PdpHeader& h = payload.header;
        if (!have_first_) {
            image_id_ = h.image_id;
            plan_.rows = static_cast<std::uint16_t>(h.rows());
            plan_.cols = static_cast<std::uint16_t>(h.cols());
            plan_.depth = h.depth();
            plan_.n_color = h.n_color;
            plan_.n_grey = static_cast<std::uint32_t>(payload.grey.size());
            plan_.pdp_len = static_cast<std::uint16_t>(
                pdp_header_size + (plan_.payload_bits() + 7) / 8);
            validate_plan(plan_);
            perm_ = build_permutation(plan_.rows, plan_.cols);
            received_.rows = plan_.rows;
            received_.cols = plan_.cols;
            received_.depth = plan_.depth;
            have_first_ = true;
        } else {
            if (h.image_id != image_id_) return AddOutcome::wrong_image;
            if (h.rows() != plan_.rows || h.cols() != plan_.cols ||
                h.depth() != plan_.depth || h.n_color != plan_.n_color ||
                payload.grey.size() != plan_.n_grey)
                return AddOutcome::geometry_mismatch;
        }

        const bool seen = received_.packet_ids.contains(h.packet_id);
        const PacketPixels slice = packet_slice(perm_, plan_, h.packet_id);
        for (std::size_t s = 0; s < slice.color.size(); ++s) {
            const std::uint32_t k = slice.color[s];
            received_.y[k] = dequantize_channel(payload.color[s].y, plan_.depth);
            received_.cb[k] = dequantize_channel(payload.color[s].cb, plan_.depth);
            received_.cr[k] = dequantize_channel(payload.color[s].cr, plan_.depth);
        }
        for (std::size_t s = 0; s < slice.grey.size(); ++s)
            received_.y[slice.grey[s]] = dequantize_channel(payload.grey[s], plan_.depth);
        received_.packet_ids.insert(h.packet_id);
        return seen ? AddOutcome::replaced : AddOutcome::accepted;
    }

    bool empty() const { return !have_first_; }
    std::uint8_t image_id() const { return image_id_; }
    const TransmissionPlan& plan() const { return plan_; }
    std::size_t packet_count() const { return received_.packet_ids.size(); }
    std::size_t sample_count() const { return received_.y.size(); }
    const ReceivedPixelSet& received() const { return received_; }

private:
    bool have_first_ = false;
    std::uint8_t image_id_ = 0;
    TransmissionPlan plan_;
    PixelPermutation perm_;
    ReceivedPixelSet received_;
};

} // namespace pcsi
