package player.audio;

/**
 * Master volume plus per-channel levels. Mute keeps the stored levels so a
 * later unmute restores the exact mix.
 */
public class VolumeControl {

    private int masterVolume = 80;
    private final int[] channelLevels = new int[8];
    private boolean muted;

    public void setMasterVolume(int volumeLevel) {
        if (volumeLevel < 0 || volumeLevel > 100) {
            throw new IllegalArgumentException("volume out of range: " + volumeLevel);
        }
        masterVolume = volumeLevel;
        muted = false;
    }

    public int getMasterVolume() {
        return muted ? 0 : masterVolume;
    }

    public void muteAllChannels() {
        muted = true;
    }

    public void restoreChannelLevels() {
        muted = false;
        for (int channel = 0; channel < channelLevels.length; channel++) {
            applyChannelLevel(channel, channelLevels[channel]);
        }
    }

    public void setChannelLevel(int channel, int level) {
        channelLevels[channel] = level;
        if (!muted) {
            applyChannelLevel(channel, level);
        }
    }

    private void applyChannelLevel(int channel, int level) {
        int scaled = level * masterVolume / 100;
        Mixer.pushLevel(channel, scaled);
    }
}
