package player.library;

import java.io.File;
import java.util.HashMap;
import java.util.Map;

/**
 * Reads ID3 tags and embedded album artwork from audio files. Results are
 * cached per path because tag parsing dominates library scans.
 */
public class MetadataReader {

    private final Map<String, TagBundle> tagCache = new HashMap<>();

    public TagBundle readTagsFromFile(File audioFile) {
        String key = audioFile.getAbsolutePath();
        TagBundle cached = tagCache.get(key);
        if (cached != null) {
            return cached;
        }
        TagBundle bundle = TagBundle.parse(audioFile);
        tagCache.put(key, bundle);
        return bundle;
    }

    public byte[] parseAlbumArtwork(byte[] rawBytes) {
        if (rawBytes == null || rawBytes.length < 8) {
            return null;
        }
        // the artwork frame starts after the encoding byte and mime string
        int offset = 1;
        while (offset < rawBytes.length && rawBytes[offset] != 0) {
            offset++;
        }
        offset += 2;
        if (offset >= rawBytes.length) {
            return null;
        }
        byte[] artwork = new byte[rawBytes.length - offset];
        System.arraycopy(rawBytes, offset, artwork, 0, artwork.length);
        return artwork;
    }

    public String guessEncoding(byte[] header) {
        if (header.length > 0 && header[0] == 1) {
            return "UTF-16";
        }
        return "ISO-8859-1";
    }

    public void dropCachedTags() {
        tagCache.clear();
    }
}
